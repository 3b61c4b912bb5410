"""Lower bound ``reg(Z) >= max_j D_j`` and closed forms for special supports.

``D_j`` is the largest ``floor((sum of m over S + j - 2) / j)`` over point
subsets ``S`` lying on a degree-``j`` rational normal curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import NamedTuple, Sequence

from .combinat import floor_div
from .errors import DegenerateConfigurationError, MalformedInputError, ResourceCapError
from .exactmath import vectors_rank
from .geometry import fit_rnc_unchecked, in_rnc_j, on_curve
from .scheme import FatPointScheme

DEFAULT_POINT_CAP = 16


class DjValue(NamedTuple):
    value: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class BoundReport:
    d_values: dict[int, DjValue]
    lower_bound: int
    witness_j: int


@dataclass(frozen=True)
class SpecialCase:
    tag: str  # single_point | collinear | two_disjoint_lines | rnc_support | none
    parameters: dict = dc_field(default_factory=dict)

    def __str__(self):
        if self.tag == "rnc_support":
            return f"rnc_support({self.parameters['t']})"
        return self.tag


class RncSupportFormula(NamedTuple):
    value: int
    p: int
    d_values: dict[int, DjValue]
    reduction: int  # max(D_1, D_p)


def d_formula(total_multiplicity: int, j: int) -> int:
    return floor_div(total_multiplicity + j - 2, j)


class _Incidence:
    """Memoised ranks of index subsets of a scheme's support."""

    def __init__(self, scheme: FatPointScheme):
        self.scheme = scheme
        self._ranks: dict[tuple[int, ...], int] = {}

    def rank(self, idx: tuple[int, ...]) -> int:
        r = self._ranks.get(idx)
        if r is None:
            r = vectors_rank(self.scheme.field, [self.scheme.points[i].coords for i in idx])
            self._ranks[idx] = r
        return r

    def general_position(self, idx: tuple[int, ...], j: int) -> bool:
        size = min(len(idx), j + 1)
        return all(self.rank(sub) == size for sub in combinations(idx, size))

    def rnc_candidate(self, idx: tuple[int, ...], j: int) -> bool:
        """Necessary condition for Rnc-j; sufficient up to ``j + 3`` points."""
        return self.rank(idx) <= j + 1 and self.general_position(idx, j)


def _check_cap(scheme: FatPointScheme, cap: int):
    if scheme.s > cap:
        raise ResourceCapError(f"{scheme.s} points exceed the subset-enumeration cap of {cap}")


def _rnc_subsets(scheme: FatPointScheme, j: int, inc: _Incidence):
    """Yield the Rnc-j subsets that can maximise the D_j formula."""
    s = scheme.s
    for k in range(1, min(j + 2, s) + 1):
        for idx in combinations(range(s), k):
            if inc.rnc_candidate(idx, j):
                yield idx
    # larger sets: every curve through a general (j + 3)-subset, taken with all scheme points on it
    covered: set[tuple[int, ...]] = set()
    if s >= j + 3:
        for idx in combinations(range(s), j + 3):
            if idx in covered:
                continue
            if inc.rank(idx) != j + 1 or not inc.general_position(idx, j):
                continue
            curve = fit_rnc_unchecked([scheme.points[i] for i in idx], j)
            on = tuple(i for i in range(s) if i in idx or on_curve(curve, scheme.points[i]) is not None)
            if len(on) > j + 3:
                # the curve is unique, so every other frame inside `on` refits it
                covered.update(combinations(on, j + 3))
            yield on


def d_j(scheme: FatPointScheme, j: int, cap: int = DEFAULT_POINT_CAP, _inc: _Incidence | None = None) -> DjValue:
    """``D_j`` together with the lexicographically least maximising subset."""
    if not 1 <= j <= scheme.n:
        raise MalformedInputError(f"j must lie in [1, {scheme.n}], got {j}")
    _check_cap(scheme, cap)
    inc = _inc or _Incidence(scheme)
    m = scheme.multiplicities
    best: DjValue | None = None
    for idx in _rnc_subsets(scheme, j, inc):
        value = d_formula(sum(m[i] for i in idx), j)
        if best is None or value > best.value or (value == best.value and idx < best.witness):
            best = DjValue(value, idx)
    return best


def lower_bound(scheme: FatPointScheme, max_j: int | None = None, cap: int = DEFAULT_POINT_CAP) -> BoundReport:
    top = scheme.n if max_j is None else min(max_j, scheme.n)
    if top < 1:
        raise MalformedInputError("max_j must be at least 1")
    inc = _Incidence(scheme)
    values = {j: d_j(scheme, j, cap, inc) for j in range(1, top + 1)}
    best = max(v.value for v in values.values())
    witness_j = min(j for j, v in values.items() if v.value == best)
    return BoundReport(values, best, witness_j)


# ---------------------------------------------------------------------------
# closed forms


def reg_collinear(multiplicities: Sequence[int]) -> int:
    """Regularity index of fat points on a line: ``m_1 + ... + m_s - 1``."""
    if not multiplicities:
        raise MalformedInputError("need at least one multiplicity")
    return sum(multiplicities) - 1


def _check_two_lines(scheme: FatPointScheme, partition: Sequence[Sequence[int]], inc: _Incidence):
    if len(partition) != 2:
        raise DegenerateConfigurationError("partition must have exactly two parts")
    first, second = (tuple(sorted(part)) for part in partition)
    if not first or not second:
        raise DegenerateConfigurationError("both lines need at least one point")
    if sorted(first + second) != list(range(scheme.s)):
        raise DegenerateConfigurationError("partition must cover every point exactly once")
    if scheme.n < 3:
        raise DegenerateConfigurationError("two disjoint lines need n >= 3")
    r1, r2 = inc.rank(first), inc.rank(second)
    if r1 > 2 or r2 > 2:
        raise DegenerateConfigurationError("a part is not collinear")
    if inc.rank(tuple(range(scheme.s))) != r1 + r2:
        raise DegenerateConfigurationError("the two lines meet")


def reg_two_lines(scheme: FatPointScheme, partition: Sequence[Sequence[int]], cap: int = DEFAULT_POINT_CAP) -> int:
    """Regularity index of fat points on two disjoint lines, which equals ``D_1``.

    The partition is re-verified; a bad one raises
    :class:`DegenerateConfigurationError`.
    """
    inc = _Incidence(scheme)
    _check_two_lines(scheme, partition, inc)
    return d_j(scheme, 1, cap, inc).value


def least_rnc_degree(scheme: FatPointScheme, upto: int | None = None) -> int | None:
    points = list(scheme.points)
    for j in range(1, (upto or scheme.n) + 1):
        if in_rnc_j(points, j, scheme.n):
            return j
    return None


def reg_rnc_support(scheme: FatPointScheme, t: int, cap: int = DEFAULT_POINT_CAP) -> RncSupportFormula:
    """``max(D_1, ..., D_t)`` for a support lying on a degree-``t`` rational normal curve.

    Also reports the least such degree ``p`` and ``max(D_1, D_p)``, which
    must agree with the full maximum.
    """
    if not in_rnc_j(list(scheme.points), t, scheme.n):
        raise DegenerateConfigurationError(f"support is not on a degree-{t} rational normal curve")
    p = least_rnc_degree(scheme, t)
    inc = _Incidence(scheme)
    values = {j: d_j(scheme, j, cap, inc) for j in range(1, t + 1)}
    full = max(v.value for v in values.values())
    return RncSupportFormula(full, p, values, max(values[1].value, values[p].value))


def find_two_lines(scheme: FatPointScheme, _inc: _Incidence | None = None) -> list[list[int]] | None:
    """Split the support over two disjoint lines, if possible."""
    if scheme.n < 3 or scheme.s < 2:
        return None
    inc = _inc or _Incidence(scheme)
    everything = tuple(range(scheme.s))
    for a, b in combinations(everything, 2):
        first = tuple(i for i in everything if inc.rank(tuple(sorted({a, b, i}))) == 2)
        second = tuple(i for i in everything if i not in first)
        if not second or inc.rank(second) > 2:
            continue
        if inc.rank(everything) == inc.rank(first) + inc.rank(second):
            return [list(first), list(second)]
    return None


def classify(scheme: FatPointScheme) -> SpecialCase:
    """Most specific configuration for which a closed form is known."""
    if scheme.s == 1:
        return SpecialCase("single_point")
    inc = _Incidence(scheme)
    if inc.rank(tuple(range(scheme.s))) <= 2:
        return SpecialCase("collinear")
    partition = find_two_lines(scheme, inc)
    if partition is not None:
        return SpecialCase("two_disjoint_lines", {"partition": partition})
    p = least_rnc_degree(scheme)
    if p is not None:
        return SpecialCase("rnc_support", {"t": p})
    return SpecialCase("none")


def closed_form(scheme: FatPointScheme, case: SpecialCase | None = None, cap: int = DEFAULT_POINT_CAP) -> int | None:
    """Value of the closed form for ``case`` (classified when omitted); None for ``none``."""
    case = case or classify(scheme)
    if case.tag == "single_point":
        return scheme.multiplicities[0] - 1
    if case.tag == "collinear":
        return reg_collinear(scheme.multiplicities)
    if case.tag == "two_disjoint_lines":
        return reg_two_lines(scheme, case.parameters["partition"], cap)
    if case.tag == "rnc_support":
        return reg_rnc_support(scheme, case.parameters["t"], cap).value
    return None
