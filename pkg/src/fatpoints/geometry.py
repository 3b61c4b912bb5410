"""Exact projective geometry of point sets: spans, general position and
rational normal curves.

A degree-``j`` rational normal curve through ``j + 3`` points in linearly
general position is unique.  It is fitted in a projective frame: the first
``j + 1`` points become the coordinate vertices, point ``j + 2`` becomes
``(1 : ... : 1)``, and with point ``j + 3`` written as ``(z_0 : ... : z_j)``
the curve is ``t -> (1/(t - a_0) : ... : 1/(t - a_j))`` with
``a_i = -1/z_i``.  Vertex ``i`` sits at ``t = a_i``, the all-ones point at
``t = oo`` and point ``j + 3`` at ``t = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

from .errors import DegenerateConfigurationError, MalformedInputError
from .exactmath import Field, Matrix, pivot_columns, solve_unique, vectors_rank
from .scheme import ProjectivePoint


def _field_of(points: Sequence[ProjectivePoint]) -> Field:
    fields = {p.field for p in points}
    if len(fields) != 1:
        raise MalformedInputError("points live over different fields")
    return fields.pop()


def _rank(points: Sequence[ProjectivePoint]) -> int:
    return vectors_rank(_field_of(points), [p.coords for p in points])


def span_dimension(points: Sequence[ProjectivePoint]) -> int:
    """Projective dimension of the linear span."""
    if not points:
        raise MalformedInputError("span of an empty point set")
    return _rank(points) - 1


def collinear(points: Sequence[ProjectivePoint]) -> bool:
    if len(points) < 2:
        raise MalformedInputError("collinearity needs at least two points")
    return span_dimension(points) <= 1


def in_general_position(points: Sequence[ProjectivePoint], j: int) -> bool:
    """True iff every subset of at most ``j + 1`` points is linearly independent."""
    if j < 1:
        raise MalformedInputError("j must be at least 1")
    size = min(len(points), j + 1)
    # independence of all size-k subsets implies it for smaller ones
    return all(_rank(sub) == size for sub in combinations(points, size))


class CurvePosition(NamedTuple):
    """Where a point sits on a fitted curve.

    ``kind`` is ``"finite"`` (``value`` is the parameter ``t``),
    ``"infinity"`` (the all-ones frame point) or ``"vertex"`` (``value`` is
    the index of the coordinate vertex, reached at ``t = a_value``).
    """

    kind: str
    value: object = None


@dataclass(frozen=True)
class RncCurve:
    j: int
    field: Field
    basis: tuple[tuple, ...]  # j + 1 ambient vectors, scaled so they sum to the all-ones point
    pivot_rows: tuple[int, ...]
    inverse: tuple[tuple, ...]  # inverse of the basis restricted to pivot_rows
    pole_parameters: tuple

    def frame_coordinates(self, point: ProjectivePoint) -> tuple | None:
        """Coordinates of ``point`` in the curve's frame, or None off its span."""
        F = self.field
        coords = point.coords
        if len(coords) != len(self.basis[0]):
            raise MalformedInputError("point and curve live in different ambient spaces")
        rhs = [coords[r] for r in self.pivot_rows]
        w = [_dot(F, row, rhs) for row in self.inverse]
        for r in range(len(coords)):
            if r not in self.pivot_rows and _dot(F, w, [b[r] for b in self.basis]) != coords[r]:
                return None
        return tuple(w)

    def point_at(self, position: CurvePosition) -> ProjectivePoint:
        F = self.field
        if position.kind == "infinity":
            w = [F.one] * (self.j + 1)
        elif position.kind == "vertex":
            w = [F.one if i == position.value else F.zero for i in range(self.j + 1)]
        else:
            w = [F.inv(F.sub(position.value, a)) for a in self.pole_parameters]
        coords = [_dot(F, w, [b[r] for b in self.basis]) for r in range(len(self.basis[0]))]
        return ProjectivePoint.from_coords(coords, F)


def _dot(F: Field, u: Sequence, v: Sequence):
    total = F.zero
    for a, b in zip(u, v):
        total = F.add(total, F.mul(a, b))
    return total


def _inverse(F: Field, rows: list[list]) -> tuple[tuple, ...]:
    size = len(rows)
    square = Matrix.from_rows(F, rows)
    cols = [solve_unique(square, [int(i == k) for i in range(size)]) for k in range(size)]
    if any(c is None for c in cols):
        raise DegenerateConfigurationError("frame vectors are dependent")
    return tuple(tuple(cols[k][i] for k in range(size)) for i in range(size))


def fit_rnc(points: Sequence[ProjectivePoint], j: int) -> RncCurve:
    """The unique degree-``j`` rational normal curve through ``j + 3`` points."""
    if j < 1:
        raise MalformedInputError("j must be at least 1")
    if len(points) != j + 3:
        raise MalformedInputError(f"fitting a degree-{j} curve needs exactly {j + 3} points")
    if not in_general_position(points, j) or span_dimension(points) != j:
        raise DegenerateConfigurationError(
            f"points are not in linearly general position on a {j}-plane"
        )
    return fit_rnc_unchecked(points, j)


def fit_rnc_unchecked(points: Sequence[ProjectivePoint], j: int) -> RncCurve:
    """:func:`fit_rnc` for callers that already verified general position."""
    F = _field_of(points)
    frame, unit, last = points[: j + 1], points[j + 1], points[j + 2]
    # j + 1 ambient coordinates on which the frame vectors are independent
    pivot_rows = tuple(pivot_columns(Matrix.from_rows(F, [p.coords for p in frame])))
    inv = _inverse(F, [[p.coords[r] for p in frame] for r in pivot_rows])
    scales = [_dot(F, row, [unit.coords[r] for r in pivot_rows]) for row in inv]
    if any(c == 0 for c in scales):
        raise DegenerateConfigurationError("unit point lies on a frame hyperplane")
    basis = tuple(tuple(F.mul(c, x) for x in p.coords) for c, p in zip(scales, frame))
    scaled_inv = tuple(tuple(F.mul(x, F.inv(c)) for x in row) for c, row in zip(scales, inv))
    z = [_dot(F, row, [last.coords[r] for r in pivot_rows]) for row in scaled_inv]
    if any(zi == 0 for zi in z):
        raise DegenerateConfigurationError("last point lies on a frame hyperplane")
    poles = tuple(F.neg(F.inv(zi)) for zi in z)
    if len(set(poles)) != len(poles):
        raise DegenerateConfigurationError("repeated pole parameters")
    return RncCurve(j, F, basis, pivot_rows, scaled_inv, poles)


def on_curve(curve: RncCurve, point: ProjectivePoint) -> CurvePosition | None:
    """Position of ``point`` on ``curve``, or None when it is not on it."""
    F = curve.field
    w = curve.frame_coordinates(point)
    if w is None:
        return None
    support = [i for i, x in enumerate(w) if x != 0]
    if len(support) == 1:
        return CurvePosition("vertex", support[0])
    if len(support) < len(w):
        return None
    if all(x == w[0] for x in w):
        return CurvePosition("infinity")
    # w_i (t - a_i) = kappa for all i; the first two coordinates fix t
    a = curve.pole_parameters
    w0, w1 = w[0], w[1]
    if w0 == w1:
        return None
    t = F.div(F.sub(F.mul(w0, a[0]), F.mul(w1, a[1])), F.sub(w0, w1))
    kappa = F.mul(w0, F.sub(t, a[0]))
    for wi, ai in zip(w, a):
        if F.mul(wi, F.sub(t, ai)) != kappa:
            return None
    return CurvePosition("finite", t)


def in_rnc_j(points: Sequence[ProjectivePoint], j: int, n: int) -> bool:
    """Whether the points lie on one degree-``j`` rational normal curve of a ``j``-plane."""
    if not 1 <= j <= n:
        raise MalformedInputError(f"j must lie in [1, {n}], got {j}")
    if not points:
        raise MalformedInputError("empty point set")
    if span_dimension(points) > j or not in_general_position(points, j):
        return False
    if len(points) <= j + 3:
        return True
    curve = fit_rnc(points[: j + 3], j)
    return all(on_curve(curve, p) is not None for p in points[j + 3 :])
