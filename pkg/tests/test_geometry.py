from fractions import Fraction

import pytest
from conftest import FP, QQ, SMALL_P, generator_specs, invertible_integer_matrices, transform
from hypothesis import given, strategies as st

from fatpoints import GeneratorSpec, generate
from fatpoints.errors import DegenerateConfigurationError, MalformedInputError
from fatpoints.geometry import (
    CurvePosition,
    collinear,
    fit_rnc,
    in_general_position,
    in_rnc_j,
    on_curve,
    span_dimension,
)
from fatpoints.scheme import ProjectivePoint


def pts(*coords, field=QQ):
    return [ProjectivePoint.from_coords(c, field) for c in coords]


SIMPLEX = pts((1, 0, 0), (0, 1, 0), (0, 0, 1))
FIVE = SIMPLEX + pts((1, 1, 1), (1, 2, 4))


def conic(p):
    x, y, z = p.coords
    return 2 * x * y - 3 * x * z + y * z


def test_span_dimension_examples():
    assert span_dimension(pts((1, 0, 0))) == 0
    assert span_dimension(pts((1, 0, 0), (0, 1, 0), (1, 1, 0))) == 1
    assert span_dimension(pts((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 2, 3, 4))) == 3
    with pytest.raises(MalformedInputError):
        span_dimension([])


def test_collinear_examples():
    assert collinear(pts((1, 0, 0), (1, 5, 7)))
    assert not collinear(SIMPLEX)
    assert collinear(generate(GeneratorSpec("line", 3, 4, seed=2), QQ).scheme.points)
    with pytest.raises(MalformedInputError):
        collinear(pts((1, 0, 0)))


def test_general_position_examples():
    assert in_general_position(SIMPLEX, 2)
    assert not in_general_position(pts((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)), 2)
    assert in_general_position(pts((3, 1, 4)), 5)
    with pytest.raises(MalformedInputError):
        in_general_position(SIMPLEX, 0)


@pytest.mark.parametrize("field", [QQ, FP, SMALL_P], ids=str)
def test_fit_conic_example(field):
    five = [ProjectivePoint.from_coords(p.integer_coords(), field) for p in FIVE]
    curve = fit_rnc(five, 2)
    assert curve.pole_parameters == tuple(field.coerce(x) for x in ("-1", "-1/2", "-1/4"))
    for t in (0, 1, 2, 5, -3):
        if field.coerce(t) not in curve.pole_parameters:
            x, y, z = curve.point_at(CurvePosition("finite", field.coerce(t))).coords
            assert field.add(field.sub(field.mul(2, field.mul(x, y)), field.mul(3, field.mul(x, z))), field.mul(y, z)) == 0
    # the fitting points at their distinguished positions
    assert [on_curve(curve, p) for p in five] == [
        CurvePosition("vertex", 0),
        CurvePosition("vertex", 1),
        CurvePosition("vertex", 2),
        CurvePosition("infinity"),
        CurvePosition("finite", 0),
    ]


def test_on_curve_examples():
    curve = fit_rnc(FIVE, 2)
    (p,) = pts((1, 4, -8))
    assert conic(p) == 0
    pos = on_curve(curve, p)
    assert pos == CurvePosition("finite", Fraction(-1, 3))
    assert curve.point_at(pos) == p
    (q,) = pts((1, 1, 2))
    assert conic(q) == -2
    assert on_curve(curve, q) is None


def test_fit_line_in_p1():
    line = fit_rnc(pts((1, 0), (0, 1), (1, 1), (1, 2)), 1)
    for c in ((3, 7), (1, -5), (0, 1), (2, 1)):
        assert on_curve(line, pts(c)[0]) is not None


def test_fit_rejects_degenerate_input():
    with pytest.raises(DegenerateConfigurationError):
        fit_rnc(pts((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 2, 3)), 2)
    with pytest.raises(MalformedInputError):
        fit_rnc(FIVE[:4], 2)


def test_in_rnc_j_examples():
    assert in_rnc_j(pts((1, 2, 3), (4, 5, 6)), 1, 2)
    assert not in_rnc_j(SIMPLEX, 1, 2)
    six = generate(GeneratorSpec("rnc", 2, 6, seed=11, j=2), QQ).scheme.points
    assert in_rnc_j(six, 2, 2)
    swapped = list(six[:5]) + pts((1, 1, 2))
    # ground truth: the conic through the first five misses (1:1:2)
    assert on_curve(fit_rnc(list(six[:5]), 2), swapped[5]) is None
    assert not in_rnc_j(swapped, 2, 2)
    with pytest.raises(MalformedInputError):
        in_rnc_j(six, 3, 2)


def test_twisted_cubic_membership():
    cubic = pts(*[(1, t, t * t, t**3) for t in range(-3, 4)])
    assert in_rnc_j(cubic, 3, 3)
    assert not in_rnc_j(cubic[:6] + pts((1, 1, 1, 2)), 3, 3)


@given(generator_specs(kinds=("rnc",), max_s=7), st.data())
def test_rnc_sets_are_downward_closed(spec, data):
    points = generate(spec, QQ).scheme.points
    assert in_rnc_j(points, spec.j, spec.n)
    sub = data.draw(st.sets(st.integers(0, len(points) - 1), min_size=1))
    assert in_rnc_j([points[i] for i in sorted(sub)], spec.j, spec.n)


@given(generator_specs(max_s=6))
def test_rnc_1_is_collinearity(spec):
    points = generate(spec, QQ).scheme.points
    if len(points) >= 2:
        assert in_rnc_j(points, 1, spec.n) == collinear(points)


@given(generator_specs(max_s=6), st.data())
def test_incidence_invariant_under_change_of_coordinates(spec, data):
    sc = generate(spec, QQ).scheme
    moved = transform(sc, data.draw(invertible_integer_matrices(sc.n + 1)))
    for j in range(1, sc.n + 1):
        assert in_rnc_j(sc.points, j, sc.n) == in_rnc_j(moved.points, j, sc.n)
        assert in_general_position(sc.points, j) == in_general_position(moved.points, j)
