"""Exact Hilbert functions, regularity indices and lower bounds for fat points in P^n."""

from .bounds import (
    BoundReport,
    DjValue,
    SpecialCase,
    classify,
    closed_form,
    d_j,
    lower_bound,
    reg_collinear,
    reg_rnc_support,
    reg_two_lines,
)
from .errors import (
    DegenerateConfigurationError,
    FatPointsError,
    InvariantViolation,
    MalformedInputError,
    ResourceCapError,
)
from .exactmath import DEFAULT_FIELD, Field, Matrix, rank, rank_with_cap
from .geometry import fit_rnc, in_general_position, in_rnc_j, on_curve
from .hilbert import hilbert_function, hilbert_profile, multiplicity, regularity_index
from .scheme import (
    FatPointScheme,
    GeneratorSpec,
    ProjectivePoint,
    generate,
    load_scheme,
    reduce_multiplicities,
    restrict,
)
from .verify import SUITES, Caps, run_suite

__version__ = "0.1.0"
