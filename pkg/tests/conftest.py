from hypothesis import HealthCheck, settings

from fatpoints import FatPointScheme, Field

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

QQ = Field.rational()
FP = Field.prime()
SMALL_P = Field.prime(10007)
BACKENDS = [FP, QQ, SMALL_P]

FIVE_DOUBLE = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 4)]


def scheme(coords, mults, field=FP):
    return FatPointScheme.from_coordinates(coords, mults, field)


from hypothesis import strategies as st  # noqa: E402

from fatpoints import GeneratorSpec  # noqa: E402


@st.composite
def generator_specs(draw, kinds=("line", "two_lines", "rnc", "generic"), max_n=3, max_s=6, max_m=3):
    kind = draw(st.sampled_from(kinds))
    seed = draw(st.integers(0, 2**32))
    m = draw(st.integers(1, max_m))
    if kind == "two_lines":
        a = draw(st.integers(1, max(1, max_s // 2)))
        b = draw(st.integers(1, max(1, max_s - a)))
        return GeneratorSpec("two_lines", 3, max_multiplicity=m, seed=seed, line_counts=(a, b))
    n = draw(st.integers(2 if kind == "rnc" else 1, max_n))
    s = draw(st.integers(1, max_s))
    j = draw(st.integers(1, n)) if kind == "rnc" else None
    return GeneratorSpec(kind, n, s, m, seed, j)


@st.composite
def invertible_integer_matrices(draw, size):
    from fractions import Fraction

    from fatpoints.exactmath import vectors_rank

    rows = st.lists(st.lists(st.integers(-3, 3), min_size=size, max_size=size), min_size=size, max_size=size)
    return draw(rows.filter(lambda g: vectors_rank(QQ, [[Fraction(x) for x in r] for r in g]) == size))


def transform(sc, g):
    """Image of a rational scheme under the linear map ``g``."""
    coords = [[sum(a * x for a, x in zip(row, pt.integer_coords())) for row in g] for pt in sc.points]
    return FatPointScheme.from_coordinates(coords, sc.multiplicities, sc.field, sc.n)
