"""Independent reference computations, used to derive the frozen test values.

Nothing here imports fatpoints.  Vanishing conditions use ordinary partial
derivatives over Q (sympy), the opposite convention to the package's
divided powers, and conic membership uses the 6x6 Veronese determinant.

    python3 tests/oracle.py      # prints the table frozen into the tests
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import sympy as sp


def hilbert(points, mults, t):
    """dim of degree-t forms modulo those vanishing to order m_i at P_i."""
    n = len(points[0]) - 1
    xs = sp.symbols(f"x0:{n + 1}")
    forms = [sp.Mul(*c) for c in combinations_with_replacement(xs, t)] if t else [sp.Integer(1)]
    rows = []
    for pt, m in zip(points, mults):
        subs = dict(zip(xs, [sp.Rational(c) for c in pt]))
        for order in range(m):
            for var in combinations_with_replacement(xs, order):
                rows.append([sp.diff(f, *var).subs(subs) if var else f.subs(subs) for f in forms])
    return sp.Matrix(rows).rank()


def multiplicity(n, mults):
    return sum(sp.binomial(m + n - 1, n) for m in mults)


def reg(points, mults):
    n = len(points[0]) - 1
    e = multiplicity(n, mults)
    t = 0
    while hilbert(points, mults, t) != e:
        t += 1
    return t


def _rank(vectors):
    return sp.Matrix([[sp.Rational(c) for c in v] for v in vectors]).rank()


def on_conic_p2(points):
    """Points of P^2 on one smooth conic: no three collinear, Veronese rank <= 5."""
    if any(_rank(c) < 3 for c in combinations(points, 3)) or any(_rank(c) < 2 for c in combinations(points, 2)):
        return False
    rows = [[x * x, y * y, z * z, x * y, x * z, y * z] for x, y, z in (map(sp.Rational, p) for p in points)]
    return sp.Matrix(rows).rank() <= 5


def d_values_p2(points, mults):
    """D_1 and D_2 in P^2 by exhaustive subset search."""
    s = len(points)
    d1 = max(
        sum(mults[i] for i in idx) - 1
        for k in range(1, s + 1)
        for idx in combinations(range(s), k)
        if k == 1 or _rank([points[i] for i in idx]) == 2
    )
    d2 = max(
        (sum(mults[i] for i in idx)) // 2
        for k in range(1, s + 1)
        for idx in combinations(range(s), k)
        if k <= 2 or (k <= 3 and _rank([points[i] for i in idx]) == 3) or (k > 3 and on_conic_p2([points[i] for i in idx]))
    )
    return d1, d2


FIVE_DOUBLE = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 4)]

FIXTURES = {
    "five_double_points": (FIVE_DOUBLE, [2] * 5),
    "collinear_222": ([(1, 0, 0), (0, 1, 0), (1, 1, 0)], [2, 2, 2]),
    "collinear_21": ([(1, 0, 0), (0, 1, 0)], [2, 1]),
    "single_m3": ([(1, 0, 0)], [3]),
    "single_double": ([(1, 0, 0)], [2]),
    "p1_two_simple": ([(1, 0), (0, 1)], [1, 1]),
    "two_lines_p3": (
        [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
        [1, 2, 1, 2, 2],
    ),
    "six_on_conic_mixed": (FIVE_DOUBLE + [(1, 4, -8)], [3, 1, 2, 1, 2, 3]),
    "seven_p2_mixed": ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (2, 1, 5), (1, 3, 0)], [2, 1, 3, 1, 2, 1, 2]),
}


def main():
    for name, (pts, m) in FIXTURES.items():
        r = reg(pts, m)
        n = len(pts[0]) - 1
        table = [hilbert(pts, m, t) for t in range(r + 1)]
        extra = f" D=(D1,D2)={d_values_p2(pts, m)}" if n == 2 else ""
        print(f"{name}: e={multiplicity(n, m)} reg={r} H={table}{extra}")
    print("conic through 5-fixture contains (1,4,-8):", on_conic_p2(FIVE_DOUBLE + [(1, 4, -8)]))
    print("conic through 5-fixture contains (1,1,2):", on_conic_p2(FIVE_DOUBLE + [(1, 1, 2)]))
    x, y, z = (Fraction(1), Fraction(4), Fraction(-8))
    print("2XY-3XZ+YZ at (1,4,-8):", 2 * x * y - 3 * x * z + y * z)


if __name__ == "__main__":
    main()
