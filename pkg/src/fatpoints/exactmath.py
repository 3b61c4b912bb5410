"""Exact scalar fields and dense linear algebra.

Two backends are provided:

* prime fields ``GF(p)`` for an odd prime ``p < 2**64``; scalars are Python
  ints in ``[0, p)`` and matrices are stored as numpy arrays so that row
  operations are vectorised (the Mersenne prime ``2**61 - 1`` gets a
  dedicated split-multiplication kernel that stays inside ``uint64``);
* the rationals; scalars are :class:`fractions.Fraction` and ranks are
  computed by fraction-free (Bareiss) elimination over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedInputError

MERSENNE_61 = (1 << 61) - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``n < 3.3e24``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def parse_scalar_text(value) -> Fraction:
    """Read an int, a Fraction or a ``"a"`` / ``"a/b"`` string as a Fraction."""
    if isinstance(value, bool):
        raise MalformedInputError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"bad scalar literal {value!r}") from exc
    raise MalformedInputError(f"unsupported scalar {value!r} ({type(value).__name__})")


@dataclass(frozen=True)
class Field:
    """Either ``GF(p)`` (``kind == "prime"``) or ``Q`` (``kind == "rational"``)."""

    kind: str = "prime"
    p: int | None = MERSENNE_61
    is_prime: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "is_prime", self.kind == "prime")
        if self.kind == "prime":
            if not isinstance(self.p, int) or isinstance(self.p, bool):
                raise MalformedInputError(f"prime modulus must be an int, got {self.p!r}")
            if self.p <= 2 or self.p >= 1 << 64 or not is_prime(self.p):
                raise MalformedInputError(f"modulus {self.p} is not an odd prime below 2^64")
        elif self.kind == "rational":
            object.__setattr__(self, "p", None)
        else:
            raise MalformedInputError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int = MERSENNE_61) -> "Field":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "Field":
        return cls("rational", None)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse the command-line spelling ``prime:<p>``, ``prime`` or ``rational``."""
        if text == "rational":
            return cls.rational()
        if text == "prime":
            return cls.prime()
        head, _, tail = text.partition(":")
        if head == "prime" and tail:
            try:
                return cls.prime(int(tail))
            except ValueError as exc:
                raise MalformedInputError(f"bad modulus in {text!r}") from exc
        raise MalformedInputError(f"unknown field {text!r}; use prime:<p> or rational")

    @classmethod
    def from_json(cls, block: dict | None) -> "Field":
        if block is None:
            return cls.prime()
        if not isinstance(block, dict):
            raise MalformedInputError("field block must be an object")
        kind = block.get("kind")
        if kind == "rational":
            return cls.rational()
        if kind == "prime":
            raw = block.get("p", str(MERSENNE_61))
            try:
                p = int(raw) if not isinstance(raw, bool) else None
            except (TypeError, ValueError) as exc:
                raise MalformedInputError(f"bad modulus {raw!r}") from exc
            return cls.prime(p)
        raise MalformedInputError(f"unknown field kind {kind!r}")

    def to_json(self) -> dict:
        if self.is_prime:
            return {"kind": "prime", "p": str(self.p)}
        return {"kind": "rational"}

    def __str__(self):
        return f"prime:{self.p}" if self.is_prime else "rational"

    # scalar arithmetic ------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def coerce(self, value):
        """Map an int / Fraction / literal string to the canonical scalar."""
        if self.is_prime and isinstance(value, int) and not isinstance(value, bool):
            return value % self.p
        q = parse_scalar_text(value)
        if not self.is_prime:
            return q
        if q.denominator % self.p == 0:
            raise MalformedInputError(f"{q} has no image in GF({self.p})")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime else a - b

    def neg(self, a):
        return -a % self.p if self.is_prime else -a

    def mul(self, a, b):
        return a * b % self.p if self.is_prime else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_prime else Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        return pow(a, e, self.p) if self.is_prime else a**e


DEFAULT_FIELD = Field.prime()


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense matrix over a :class:`Field`.

    Treat instances as immutable: rank routines eliminate on private copies.
    """

    __slots__ = ("field", "nrows", "ncols", "_data")

    def __init__(self, field: Field, nrows: int, ncols: int, data):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._data = data

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise MalformedInputError("ragged rows")
        coerced = [[_checked_coerce(field, x) for x in r] for r in rows]
        if field.is_prime:
            data = np.array(coerced, dtype=_storage_dtype(field.p)).reshape(nrows, ncols)
        else:
            data = coerced
        return cls(field, nrows, ncols, data)

    @classmethod
    def from_residues(cls, field: Field, array: np.ndarray) -> "Matrix":
        """Wrap an array of already reduced residues (prime fields only)."""
        if not field.is_prime:
            raise MalformedInputError("from_residues needs a prime field")
        array = np.asarray(array, dtype=_storage_dtype(field.p))
        if array.ndim != 2:
            raise MalformedInputError("expected a 2-d array")
        return cls(field, array.shape[0], array.shape[1], array)

    @classmethod
    def identity(cls, field: Field, size: int) -> "Matrix":
        return cls.from_rows(field, [[int(i == k) for k in range(size)] for i in range(size)])

    def entry(self, i: int, k: int):
        if self.field.is_prime:
            return int(self._data[i, k])
        return self._data[i][k]

    def to_rows(self) -> list[list]:
        if self.field.is_prime:
            return [[int(x) for x in row] for row in self._data]
        return [list(r) for r in self._data]

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self.to_rows() for x in row)

    def transpose(self) -> "Matrix":
        if self.field.is_prime:
            return Matrix(self.field, self.ncols, self.nrows, self._data.T.copy())
        return Matrix(self.field, self.ncols, self.nrows, [list(c) for c in zip(*self._data)])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field, self.nrows, self.ncols) == (other.field, other.nrows, other.ncols) and (
            self.to_rows() == other.to_rows()
        )

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"


def _checked_coerce(field: Field, value):
    if isinstance(value, float):
        raise MalformedInputError("floating point entries are not exact")
    return field.coerce(value)


def _storage_dtype(p: int):
    return np.uint64 if p < (1 << 32) or p == MERSENNE_61 else object


# -- prime field kernels ----------------------------------------------------

_LO30 = np.uint64((1 << 30) - 1)
_LO31 = np.uint64((1 << 31) - 1)
_P61 = np.uint64(MERSENNE_61)


def _mulmod_m61(a, b):
    # split both operands at bit 31 so every partial product fits in uint64;
    # 2^61 == 1 and 2^62 == 2 modulo the Mersenne prime.
    a0, a1 = a & _LO31, a >> np.uint64(31)
    b0, b1 = b & _LO31, b >> np.uint64(31)
    mid = a1 * b0 + a0 * b1
    x = ((a1 * b1) << np.uint64(1)) + (mid >> np.uint64(30)) + ((mid & _LO30) << np.uint64(31)) + a0 * b0
    x = (x & _P61) + (x >> np.uint64(61))
    x = (x & _P61) + (x >> np.uint64(61))
    return np.where(x >= _P61, x - _P61, x)


def _kernels(p: int):
    """Return ``(mulmod, submod)`` vectorised over the storage dtype for ``p``."""
    if p == MERSENNE_61:
        pp = _P61

        def submod(a, b):
            d = a + (pp - b)
            return np.where(d >= pp, d - pp, d)

        return _mulmod_m61, submod
    if p < (1 << 32):
        pp = np.uint64(p)
        return (lambda a, b: (a * b) % pp), (lambda a, b: (a + (pp - b)) % pp)
    return (lambda a, b: (a * b) % p), (lambda a, b: (a - b) % p)


def _rank_mod_p(data: np.ndarray, p: int, cap: int) -> tuple[int, list[int]]:
    a = data.copy()
    nrows, ncols = a.shape
    mulmod, submod = _kernels(p)
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows or r >= cap:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        pivot_row = mulmod(a[r, c:], a.dtype.type(inv) if a.dtype != object else inv)
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if below.size:
            factors = a[below, c][:, None]
            a[below, c:] = submod(a[below, c:], mulmod(factors, pivot_row[None, :]))
        a[r, c:] = pivot_row
        pivots.append(c)
        r += 1
    return r, pivots


# -- rational kernel (Bareiss) ----------------------------------------------


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def _rank_bareiss(rows: list[list[Fraction]], cap: int) -> tuple[int, list[int]]:
    m = _integer_rows(rows)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows or r >= cap:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        top = m[r]
        d = top[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                m[i] = [0] * (c + 1) + [(d * x - f * y) // prev for x, y in zip(row[c + 1 :], top[c + 1 :])]
            elif d != prev:
                m[i] = [0] * (c + 1) + [d * x // prev for x in row[c + 1 :]]
        prev = d
        pivots.append(c)
        r += 1
    return r, pivots


def _rank_small(field: Field, rows: list[list], cap: int) -> tuple[int, list[int]]:
    # plain Gaussian elimination; beats numpy dispatch on tiny matrices
    rows = [list(r) for r in rows]
    r = 0
    pivots: list[int] = []
    for c in range(len(rows[0])):
        if r == len(rows) or r >= cap:
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        top = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f != 0:
                f = field.mul(f, inv)
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], top)]
        pivots.append(c)
        r += 1
    return r, pivots


_SMALL = 64


def _eliminate(m: Matrix, cap: int) -> tuple[int, list[int]]:
    if m.nrows == 0 or m.ncols == 0:
        return 0, []
    if m.nrows * m.ncols <= _SMALL:
        return _rank_small(m.field, m.to_rows(), cap)
    if m.field.is_prime:
        return _rank_mod_p(m._data, m.field.p, cap)
    return _rank_bareiss(m._data, cap)


def rank(m: Matrix) -> int:
    """Exact rank of ``m`` over its field."""
    return _eliminate(m, min(m.nrows, m.ncols) + 1)[0]


def rank_with_cap(m: Matrix, cap: int) -> tuple[int, bool]:
    """Rank, truncated at ``cap``.

    Returns ``(cap, True)`` as soon as ``cap`` independent rows are found,
    otherwise ``(rank, False)``.
    """
    if cap < 0:
        raise MalformedInputError("cap must be non-negative")
    r, _ = _eliminate(m, cap)
    return (cap, True) if r >= cap else (r, False)


def pivot_columns(m: Matrix) -> list[int]:
    """Pivot columns of the row-echelon form, in elimination order."""
    return _eliminate(m, min(m.nrows, m.ncols) + 1)[1]


def solve_unique(m: Matrix, rhs: Sequence) -> list | None:
    """Solve ``m x = rhs`` for square ``m``; ``None`` if ``m`` is singular."""
    if m.nrows != m.ncols:
        raise MalformedInputError(f"solve_unique needs a square matrix, got {m.nrows}x{m.ncols}")
    if len(rhs) != m.nrows:
        raise MalformedInputError("right-hand side length does not match the matrix")
    F = m.field
    n = m.nrows
    aug = [row + [F.coerce(b)] for row, b in zip(m.to_rows(), rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = F.inv(aug[c][c])
        aug[c] = [F.mul(x, inv) for x in aug[c]]
        for i in range(n):
            f = aug[i][c]
            if i != c and f != 0:
                aug[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[i], aug[c])]
    return [row[n] for row in aug]


def vectors_rank(field: Field, vectors: Iterable[Sequence]) -> int:
    """Rank of a list of coordinate vectors (already canonical scalars)."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    if field.is_prime:
        return rank(Matrix.from_residues(field, np.array(rows, dtype=_storage_dtype(field.p))))
    return rank(Matrix(field, len(rows), len(rows[0]), rows))
