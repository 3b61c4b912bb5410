"""Fat point schemes: points, multiplicities, configuration documents and generators."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from .errors import MalformedInputError, ResourceCapError
from .exactmath import DEFAULT_FIELD, Field, vectors_rank


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of projective space, first nonzero coordinate scaled to one."""

    coords: tuple
    field: Field = DEFAULT_FIELD

    @classmethod
    def from_coords(cls, coords: Sequence, field: Field = DEFAULT_FIELD) -> "ProjectivePoint":
        values = [field.coerce(c) for c in coords]
        lead = next((x for x in values if x != 0), None)
        if lead is None:
            raise MalformedInputError("the zero vector is not a projective point")
        inv = field.inv(lead)
        return cls(tuple(field.mul(x, inv) for x in values), field)

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def integer_coords(self) -> tuple[int, ...]:
        """Primitive integer representative (rational field only)."""
        if self.field.is_prime:
            return tuple(self.coords)
        scale = lcm(*(x.denominator for x in self.coords))
        return tuple(int(x * scale) for x in self.coords)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coords]

    def __str__(self):
        return "(" + ":".join(str(x) for x in self.coords) + ")"


@dataclass(frozen=True)
class FatPointScheme:
    """``Z = m_1 P_1 + ... + m_s P_s`` in projective ``n``-space."""

    n: int
    points: tuple[ProjectivePoint, ...]
    multiplicities: tuple[int, ...]
    field: Field = DEFAULT_FIELD

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise MalformedInputError(f"ambient dimension must be a positive integer, got {self.n!r}")
        if not self.points:
            raise MalformedInputError("a scheme needs at least one point")
        if len(self.points) != len(self.multiplicities):
            raise MalformedInputError("points and multiplicities differ in length")
        for i, (pt, m) in enumerate(zip(self.points, self.multiplicities)):
            if len(pt.coords) != self.n + 1:
                raise MalformedInputError(f"point {i} has {len(pt.coords)} coordinates, expected {self.n + 1}")
            if pt.field != self.field:
                raise MalformedInputError(f"point {i} lives over {pt.field}, scheme over {self.field}")
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise MalformedInputError(f"multiplicity of point {i} must be a positive integer, got {m!r}")
        seen = {}
        for i, pt in enumerate(self.points):
            if pt.coords in seen:
                raise MalformedInputError(f"points {seen[pt.coords]} and {i} coincide")
            seen[pt.coords] = i

    @classmethod
    def from_coordinates(
        cls, coords: Iterable[Sequence], multiplicities: Sequence[int], field: Field = DEFAULT_FIELD, n: int | None = None
    ) -> "FatPointScheme":
        points = tuple(ProjectivePoint.from_coords(c, field) for c in coords)
        if n is None:
            n = points[0].dimension if points else 0
        return cls(n, points, tuple(multiplicities), field)

    @property
    def s(self) -> int:
        return len(self.points)

    def with_field(self, field: Field) -> "FatPointScheme":
        """Reinterpret a rational scheme over another field."""
        if field == self.field:
            return self
        if self.field.is_prime:
            raise MalformedInputError("prime-field coordinates cannot be lifted to another field")
        return FatPointScheme.from_coordinates(
            [p.integer_coords() for p in self.points], self.multiplicities, field, self.n
        )

    def to_document(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.to_json(),
            "points": [p.to_json() for p in self.points],
            "multiplicities": list(self.multiplicities),
        }

    def dumps(self, indent: int | None = None) -> str:
        return json.dumps(self.to_document(), indent=indent)

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]


def load_scheme(document: str | dict, field: Field | None = None) -> FatPointScheme:
    """Parse and validate a configuration document.

    ``field`` overrides the document's own field block.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise MalformedInputError("configuration must be a JSON object")
    missing = {"n", "points", "multiplicities"} - document.keys()
    if missing:
        raise MalformedInputError(f"missing keys: {', '.join(sorted(missing))}")
    n = document["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInputError(f"n must be a positive integer, got {n!r}")
    if field is None:
        field = Field.from_json(document.get("field"))
    points = document["points"]
    mults = document["multiplicities"]
    if not isinstance(points, list) or not isinstance(mults, list):
        raise MalformedInputError("points and multiplicities must be lists")
    for i, row in enumerate(points):
        if not isinstance(row, list) or len(row) != n + 1:
            raise MalformedInputError(f"point {i} must list {n + 1} coordinates")
    return FatPointScheme.from_coordinates(points, mults, field, n)


def restrict(scheme: FatPointScheme, indices: Iterable[int]) -> FatPointScheme:
    """Subscheme supported on the selected points, kept in input order."""
    chosen = sorted(set(indices))
    if not chosen:
        raise MalformedInputError("empty index set")
    if chosen[0] < 0 or chosen[-1] >= scheme.s:
        raise MalformedInputError(f"index out of range for a scheme with {scheme.s} points")
    return FatPointScheme(
        scheme.n,
        tuple(scheme.points[i] for i in chosen),
        tuple(scheme.multiplicities[i] for i in chosen),
        scheme.field,
    )


def reduce_multiplicities(scheme: FatPointScheme, new_m: Sequence[int]) -> FatPointScheme:
    """Lower multiplicities pointwise; points whose new multiplicity is 0 are dropped."""
    if len(new_m) != scheme.s:
        raise MalformedInputError("new multiplicity vector has the wrong length")
    for i, (a, b) in enumerate(zip(new_m, scheme.multiplicities)):
        if a < 0 or a > b:
            raise MalformedInputError(f"new multiplicity {a} at point {i} not in [0, {b}]")
    if not any(new_m):
        raise MalformedInputError("all new multiplicities are zero")
    keep = [i for i, a in enumerate(new_m) if a > 0]
    return FatPointScheme(
        scheme.n,
        tuple(scheme.points[i] for i in keep),
        tuple(new_m[i] for i in keep),
        scheme.field,
    )


# ---------------------------------------------------------------------------
# generators

GENERATOR_KINDS = ("line", "two_lines", "rnc", "generic")
RETRY_BUDGET = 100


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    point_count: int = 3
    max_multiplicity: int = 1
    seed: int = 0
    j: int | None = None
    line_counts: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise MalformedInputError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise MalformedInputError("n must be at least 1")
        if self.max_multiplicity < 1:
            raise MalformedInputError("max multiplicity must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise MalformedInputError("seed must fit in 64 bits")
        if self.kind == "two_lines":
            if self.n < 3:
                raise MalformedInputError("two disjoint lines need n >= 3")
            counts = self.line_counts or (self.point_count - self.point_count // 2, self.point_count // 2)
            if len(counts) != 2 or min(counts) < 1:
                raise MalformedInputError("two_lines needs a positive count on each line")
            object.__setattr__(self, "line_counts", tuple(counts))
            object.__setattr__(self, "point_count", sum(counts))
        elif self.point_count < 1:
            raise MalformedInputError("point_count must be at least 1")
        if self.kind == "rnc":
            if self.j is None or not 1 <= self.j <= self.n:
                raise MalformedInputError(f"rnc generator needs 1 <= j <= n, got j={self.j}")


@dataclass(frozen=True)
class GeneratedScheme:
    scheme: FatPointScheme
    spec: GeneratorSpec
    truth: dict = dc_field(default_factory=dict)


def _random_change_of_coordinates(rng: random.Random, size: int) -> list[list[int]]:
    Q = Field.rational()
    while True:
        g = [[rng.randint(-3, 3) for _ in range(size)] for _ in range(size)]
        if vectors_rank(Q, [[Fraction(x) for x in row] for row in g]) == size:
            return g


def _apply(g: list[list[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in g]


def _distinct_ints(rng: random.Random, count: int, radius: int) -> list[int]:
    return rng.sample(range(-radius, radius + 1), count)


def _moment_point(t: int, j: int, n: int) -> list[int]:
    return [t ** (j - k) for k in range(j + 1)] + [0] * (n - j)


def _standard_configuration(spec: GeneratorSpec, rng: random.Random) -> tuple[list[list[int]], dict]:
    n, s = spec.n, spec.point_count
    radius = max(6, s)
    if spec.kind == "line":
        ts = _distinct_ints(rng, s, radius)
        return [[1, t] + [0] * (n - 1) for t in ts], {"parameters": ts}
    if spec.kind == "rnc":
        ts = _distinct_ints(rng, s, radius)
        return [_moment_point(t, spec.j, n) for t in ts], {"parameters": ts, "j": spec.j}
    if spec.kind == "two_lines":
        a, b = spec.line_counts
        ts = _distinct_ints(rng, a, radius)
        us = _distinct_ints(rng, b, radius)
        pts = [[1, t, 0, 0] + [0] * (n - 3) for t in ts] + [[0, 0, 1, u] + [0] * (n - 3) for u in us]
        order = list(range(a + b))
        rng.shuffle(order)
        pts = [pts[k] for k in order]
        first = sorted(i for i, k in enumerate(order) if k < a)
        second = sorted(i for i, k in enumerate(order) if k >= a)
        return pts, {"partition": [first, second]}
    pts = [[rng.randint(-10, 10) for _ in range(n + 1)] for _ in range(s)]
    return pts, {}


def _generic_ok(scheme: FatPointScheme) -> bool:
    size = min(scheme.s, scheme.n + 1)
    return all(
        vectors_rank(scheme.field, [scheme.points[i].coords for i in sub]) == size
        for sub in combinations(range(scheme.s), size)
    )


def generate(spec: GeneratorSpec, field: Field = DEFAULT_FIELD) -> GeneratedScheme:
    """Seeded configuration of the requested family.

    Coordinates are small integers (before reduction into ``field``), so the
    same spec replays identically under every backend.
    """
    rng = random.Random(spec.seed)
    for _ in range(RETRY_BUDGET):
        base, truth = _standard_configuration(spec, rng)
        change = _random_change_of_coordinates(rng, spec.n + 1)
        coords = [_apply(change, v) for v in base]
        mults = [rng.randint(1, spec.max_multiplicity) for _ in coords]
        try:
            scheme = FatPointScheme.from_coordinates(coords, mults, field, spec.n)
        except MalformedInputError:
            continue
        if spec.kind == "generic" and not _generic_ok(scheme):
            continue
        truth = {"kind": spec.kind, **truth, "change_of_coordinates": change}
        return GeneratedScheme(scheme, spec, truth)
    raise ResourceCapError(f"could not generate a valid {spec.kind} configuration in {RETRY_BUDGET} attempts")

