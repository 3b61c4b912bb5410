"""Multi-indices, binomials and the divided-power coefficients."""

from __future__ import annotations

from functools import lru_cache
from math import comb, prod

from .errors import MalformedInputError

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(var_count: int, degree: int) -> tuple[MultiIndex, ...]:
    """All exponent vectors of length ``var_count`` summing to ``degree``.

    Order is colexicographic: vectors are compared at the last position where
    they differ, so ``(d, 0, ..., 0)`` comes first and ``(0, ..., 0, d)`` last.
    """
    if var_count < 1:
        raise MalformedInputError("var_count must be at least 1")
    if degree < 0:
        return ()
    if var_count == 1:
        return ((degree,),)
    return tuple(
        head + (last,) for last in range(degree + 1) for head in monomials(var_count - 1, degree - last)
    )


def monomials_up_to(var_count: int, degree: int) -> tuple[MultiIndex, ...]:
    """Graded colex enumeration of every exponent vector of degree ``<= degree``."""
    return tuple(a for d in range(degree + 1) for a in monomials(var_count, d))


def binomial(a: int, b: int) -> int:
    if b < 0 or a < 0:
        return 0
    return comb(a, b)


def hasse_coefficient(beta: MultiIndex, alpha: MultiIndex) -> int:
    """Coefficient of ``x^(beta - alpha)`` in the divided-power derivative ``D^alpha x^beta``."""
    if len(beta) != len(alpha):
        raise MalformedInputError("multi-indices have different lengths")
    return prod(comb(b, a) for b, a in zip(beta, alpha))


def floor_div(numerator: int, divisor: int) -> int:
    if divisor < 1:
        raise MalformedInputError("divisor must be positive")
    return numerator // divisor
