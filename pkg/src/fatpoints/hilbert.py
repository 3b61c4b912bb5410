"""Brute-force Hilbert function of a fat point scheme.

A form ``f`` of degree ``t`` lies in ``p_i^m`` iff every divided-power
derivative ``D^alpha f`` with ``|alpha| < m`` vanishes at ``P_i``.  On a
monomial, ``D^alpha x^beta = prod C(beta_k, alpha_k) x^(beta - alpha)``, so
the conditions are the rows of a matrix whose rank is ``H(t)``.  Divided
powers avoid factorials and stay valid in small characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .combinat import MultiIndex, binomial, monomials, monomials_up_to
from .errors import InvariantViolation, MalformedInputError
from .exactmath import Matrix, _kernels, _storage_dtype, rank_with_cap
from .scheme import FatPointScheme


@dataclass(frozen=True)
class ConditionMatrix:
    matrix: Matrix
    degree: int
    row_labels: tuple[tuple[int, MultiIndex], ...]
    col_labels: tuple[MultiIndex, ...]


@dataclass(frozen=True)
class HilbertProfile:
    e: int
    rows: tuple[tuple[int, int], ...]
    reg: int

    @property
    def values(self) -> list[int]:
        return [h for _, h in self.rows]


def multiplicity(scheme: FatPointScheme) -> int:
    """``e(R/I) = sum_i C(m_i + n - 1, n)``."""
    return sum(binomial(m + scheme.n - 1, scheme.n) for m in scheme.multiplicities)


def _alphas(point, m: int) -> tuple[MultiIndex, ...]:
    # derivatives in the affine chart of the leading coordinate; those
    # involving that variable are implied by the rest
    lead = next(k for k, c in enumerate(point.coords) if c != 0)
    return tuple(a for a in monomials_up_to(len(point.coords), m - 1) if a[lead] == 0)


def _row_labels(scheme: FatPointScheme) -> list[tuple[int, MultiIndex]]:
    return [(i, a) for i, (pt, m) in enumerate(zip(scheme.points, scheme.multiplicities)) for a in _alphas(pt, m)]


def _prime_block(scheme: FatPointScheme, t: int, cols: np.ndarray) -> np.ndarray:
    field = scheme.field
    p = field.p
    dtype = _storage_dtype(p)
    mulmod, _ = _kernels(p)
    nv = scheme.n + 1
    max_m = max(scheme.multiplicities)
    binom = np.array(
        [[comb(b, a) % p for a in range(max_m)] for b in range(t + 1)], dtype=dtype
    )
    blocks = []
    for pt, m in zip(scheme.points, scheme.multiplicities):
        alphas = np.array(_alphas(pt, m), dtype=np.int64).reshape(-1, nv)
        powers = np.array([[pow(c, e, p) for e in range(t + 1)] for c in pt.coords], dtype=dtype)
        diff = cols[None, :, :] - alphas[:, None, :]
        valid = (diff >= 0).all(axis=2)
        safe = np.clip(diff, 0, None)
        block = None
        for k in range(nv):
            factor = mulmod(powers[k][safe[:, :, k]], binom[cols[None, :, k], alphas[:, None, k]])
            block = factor if block is None else mulmod(block, factor)
        block = np.where(valid, block, dtype(0) if dtype is not object else 0)
        blocks.append(block.astype(dtype))
    return np.concatenate(blocks, axis=0)


def _rational_rows(scheme: FatPointScheme, t: int, cols: tuple[MultiIndex, ...]) -> list[list[int]]:
    # scaling a point's coordinates rescales its rows, so primitive integer
    # representatives give a matrix of the same rank
    rows = []
    for pt, m in zip(scheme.points, scheme.multiplicities):
        coords = pt.integer_coords()
        powers = [[c**e for e in range(t + 1)] for c in coords]
        for alpha in _alphas(pt, m):
            row = []
            for beta in cols:
                v = 1
                for k, (b, a) in enumerate(zip(beta, alpha)):
                    if b < a:
                        v = 0
                        break
                    v *= comb(b, a) * powers[k][b - a]
                row.append(v)
            rows.append(row)
    return rows


def condition_matrix(scheme: FatPointScheme, t: int) -> ConditionMatrix:
    """Vanishing conditions of ``I`` on degree-``t`` forms.

    Rows are ``(point index, alpha)`` with ``|alpha| < m_i`` and ``alpha``
    free of the point's leading variable, so point ``i`` contributes
    ``C(m_i + n - 1, n)`` rows; columns are the degree-``t`` monomials.  Both
    are in graded colex order.
    """
    if t < 0:
        raise MalformedInputError("degree must be non-negative")
    col_labels = monomials(scheme.n + 1, t)
    row_labels = tuple(_row_labels(scheme))
    if scheme.field.is_prime:
        cols = np.array(col_labels, dtype=np.int64).reshape(-1, scheme.n + 1)
        matrix = Matrix.from_residues(scheme.field, _prime_block(scheme, t, cols))
    else:
        rows = _rational_rows(scheme, t, col_labels)
        matrix = Matrix(scheme.field, len(rows), len(col_labels), rows)
    return ConditionMatrix(matrix, t, row_labels, col_labels)


def hilbert_function(scheme: FatPointScheme, t: int) -> int:
    """``H_{R/I}(t)``, the number of independent conditions in degree ``t``."""
    e = multiplicity(scheme)
    h, _ = rank_with_cap(condition_matrix(scheme, t).matrix, e)
    return h


def _search_window(scheme: FatPointScheme) -> tuple[int, int]:
    e = multiplicity(scheme)
    lo = max(scheme.multiplicities) - 1
    # H(t) <= C(n + t, n), so nothing below the first t with enough monomials qualifies
    while binomial(scheme.n + lo, scheme.n) < e:
        lo += 1
    return lo, sum(scheme.multiplicities) - 1


def regularity_index(scheme: FatPointScheme, cache: dict[int, int] | None = None) -> int:
    """Least ``t`` with ``H(t) = e``.

    ``H`` is non-decreasing, so the window ``[lo, sum(m) - 1]`` is searched by
    galloping up from ``lo`` and then bisecting.  ``cache`` (degree -> H)
    is filled with every value computed.
    """
    cache = {} if cache is None else cache
    e = multiplicity(scheme)

    def full(t: int) -> bool:
        if t not in cache:
            cache[t] = hilbert_function(scheme, t)
        return cache[t] == e

    lo, hi = _search_window(scheme)
    below = lo - 1  # largest degree known to be short of e
    step = 1
    probe = lo
    while True:
        probe = min(probe, hi)
        if full(probe):
            break
        if probe == hi:
            raise InvariantViolation(f"H({hi}) = {cache[hi]} < e = {e}; rank computation is broken")
        below = probe
        probe = lo + 2 * step - 1
        step *= 2
    top = probe
    while top - below > 1:
        mid = (top + below) // 2
        if full(mid):
            top = mid
        else:
            below = mid
    return top


def hilbert_profile(scheme: FatPointScheme) -> HilbertProfile:
    """Table of ``H(t)`` for ``t = 0 .. reg``."""
    cache: dict[int, int] = {}
    reg = regularity_index(scheme, cache)
    rows = []
    for t in range(reg + 1):
        if t not in cache:
            cache[t] = hilbert_function(scheme, t)
        rows.append((t, cache[t]))
    return HilbertProfile(multiplicity(scheme), tuple(rows), reg)
