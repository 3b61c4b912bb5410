"""Replay the regularity results against the rank oracle.

Every check returns a :class:`Verdict`; :func:`run_suite` draws seeded
configurations, runs the selected checks and collects a JSON-ready
:class:`VerificationReport`.  A case that fails over a prime field is
re-run over the rationals: when the rational run passes, the case is marked
as a characteristic anomaly instead of a failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable, Sequence

from . import bounds
from .combinat import binomial
from .errors import MalformedInputError, ResourceCapError
from .exactmath import DEFAULT_FIELD, Field
from .geometry import collinear, in_rnc_j
from .hilbert import hilbert_function, hilbert_profile, regularity_index
from .scheme import (
    FatPointScheme,
    GeneratedScheme,
    GeneratorSpec,
    generate,
    load_scheme,
    reduce_multiplicities,
    restrict,
)

SUITES = (
    "lower-bound",
    "subset-mono",
    "mult-mono",
    "exact-line",
    "exact-two-lines",
    "exact-rnc",
    "hilbert-invariants",
)


@dataclass(frozen=True)
class Caps:
    n_max: int = 3
    s_max: int = 8
    m_max: int = 3
    point_cap: int = bounds.DEFAULT_POINT_CAP

    def __post_init__(self):
        if self.n_max < 1 or self.s_max < 1 or self.m_max < 1:
            raise MalformedInputError("caps must be positive")


@dataclass
class Verdict:
    passed: bool
    reg: int | None = None
    value: int | None = None
    detail: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# single-scheme checks


def check_lower_bound(scheme: FatPointScheme, cap: int = bounds.DEFAULT_POINT_CAP) -> Verdict:
    """Pass iff ``reg(Z) >= max_j D_j``."""
    report = bounds.lower_bound(scheme, cap=cap)
    reg = regularity_index(scheme)
    detail = {
        "d_values": {str(j): {"value": v.value, "witness": list(v.witness)} for j, v in report.d_values.items()},
        "witness_j": report.witness_j,
    }
    return Verdict(reg >= report.lower_bound, reg, report.lower_bound, detail)


def _subset_samples(s: int, trials: int, rng: random.Random) -> list[tuple[int, ...]]:
    samples = [tuple(range(s))] + [(i,) for i in range(s)]
    for _ in range(trials):
        size = rng.randint(1, s)
        samples.append(tuple(sorted(rng.sample(range(s), size))))
    return samples


def check_subset_monotonicity(scheme: FatPointScheme, trials: int = 5, seed: int = 0) -> Verdict:
    """Pass iff ``reg`` of every sampled subscheme is at most ``reg(Z)``.

    Samples are the full set, every singleton and ``trials`` random subsets.
    """
    rng = random.Random(seed)
    reg = regularity_index(scheme)
    samples = []
    worst = None
    for idx in _subset_samples(scheme.s, trials, rng):
        sub_reg = regularity_index(restrict(scheme, idx))
        samples.append({"subset": list(idx), "reg": sub_reg})
        worst = sub_reg if worst is None else max(worst, sub_reg)
    return Verdict(all(x["reg"] <= reg for x in samples), reg, worst, {"samples": samples})


def _multiplicity_samples(m: Sequence[int], trials: int, rng: random.Random) -> list[tuple[int, ...]]:
    samples = [tuple(m)]
    for i in range(len(m)):
        step = list(m)
        step[i] -= 1
        if any(step):
            samples.append(tuple(step))
    while trials > 0:
        vec = tuple(rng.randint(0, x) for x in m)
        if any(vec):
            samples.append(vec)
            trials -= 1
    return samples


def check_multiplicity_monotonicity(scheme: FatPointScheme, trials: int = 5, seed: int = 0) -> Verdict:
    """Pass iff lowering multiplicities never raises ``reg``.

    Samples are ``m`` itself, every one-step decrement and ``trials`` random
    vectors ``0 <= v <= m`` (not all zero).
    """
    rng = random.Random(seed)
    reg = regularity_index(scheme)
    samples = []
    for vec in _multiplicity_samples(scheme.multiplicities, trials, rng):
        sub_reg = regularity_index(reduce_multiplicities(scheme, vec))
        samples.append({"m": list(vec), "reg": sub_reg})
    worst = max(x["reg"] for x in samples)
    return Verdict(all(x["reg"] <= reg for x in samples), reg, worst, {"samples": samples})


def check_hilbert_invariants(scheme: FatPointScheme) -> Verdict:
    """Shape of the Hilbert function: strict growth below ``e``, then flat."""
    profile = hilbert_profile(scheme)
    e, reg, values = profile.e, profile.reg, profile.values
    problems = []
    if values[0] != 1:
        problems.append(f"H(0) = {values[0]}")
    for t, h in profile.rows:
        if h > min(binomial(scheme.n + t, scheme.n), e):
            problems.append(f"H({t}) = {h} exceeds min(C(n+t,n), e)")
        if t > 0 and values[t - 1] < e and h <= values[t - 1]:
            problems.append(f"H not strictly increasing at t = {t}")
    if values[reg] != e:
        problems.append(f"H(reg) = {values[reg]} != e = {e}")
    if reg > 0 and values[reg - 1] >= e:
        problems.append("H(reg - 1) already reaches e")
    for t in (reg + 1, reg + 2):
        if hilbert_function(scheme, t) != e:
            problems.append(f"H({t}) drops below e after stabilising")
    return Verdict(not problems, reg, e, {"profile": values, "problems": problems})


def check_exact_formula(case: GeneratedScheme, cap: int = bounds.DEFAULT_POINT_CAP) -> Verdict:
    """Oracle ``reg`` against the closed form matching the case's generator.

    The configuration must first be recognised as belonging to its family;
    otherwise the verdict fails with the evidence attached.
    """
    scheme, kind = case.scheme, case.spec.kind
    points = list(scheme.points)
    detail: dict = {"generator": kind}
    if kind == "line":
        recognised = scheme.s == 1 or collinear(points)
        value = bounds.reg_collinear(scheme.multiplicities) if recognised else None
    elif kind == "two_lines":
        found = bounds.classify(scheme)
        detail["classified"] = str(found)
        recognised = found.tag == "two_disjoint_lines"
        if recognised:
            detail["partition"] = found.parameters["partition"]
            value = bounds.reg_two_lines(scheme, case.truth["partition"], cap)
        else:
            value = None
    elif kind == "rnc":
        j = case.spec.j
        recognised = in_rnc_j(points, j, scheme.n)
        value = None
        if recognised:
            formula = bounds.reg_rnc_support(scheme, j, cap)
            value = formula.value
            detail.update(p=formula.p, reduction=formula.reduction,
                          d_values={str(k): v.value for k, v in formula.d_values.items()})
            if formula.reduction != formula.value:
                detail["problem"] = "max(D_1, D_p) differs from max over j <= t"
    else:
        raise MalformedInputError(f"no closed form for generator kind {kind!r}")
    if not recognised:
        detail["problem"] = "configuration not recognised by the classifier"
        return Verdict(False, None, None, detail)
    reg = regularity_index(scheme)
    return Verdict(reg == value and "problem" not in detail, reg, value, detail)


def check_exact_formulas(cases: Sequence[GeneratedScheme], cap: int = bounds.DEFAULT_POINT_CAP) -> Verdict:
    verdicts = [check_exact_formula(c, cap) for c in cases]
    return Verdict(
        all(v.passed for v in verdicts),
        detail={"cases": [{"reg": v.reg, "value": v.value, "passed": v.passed} for v in verdicts]},
    )


# ---------------------------------------------------------------------------
# suites


def _pick_n(rng: random.Random, caps: Caps, low: int) -> int | None:
    if caps.n_max < low:
        return None
    return rng.randint(low, caps.n_max)


def _mixed_spec(rng: random.Random, caps: Caps) -> GeneratorSpec:
    kinds = ["line", "rnc", "generic"] + (["two_lines"] if caps.n_max >= 3 and caps.s_max >= 2 else [])
    kind = rng.choice(kinds)
    seed = rng.getrandbits(63)
    if kind == "two_lines":
        n = rng.randint(3, caps.n_max)
        total = rng.randint(2, caps.s_max)
        a = rng.randint(1, total - 1)
        return GeneratorSpec(kind, n, max_multiplicity=caps.m_max, seed=seed, line_counts=(a, total - a))
    n = rng.randint(min(2, caps.n_max), caps.n_max)
    s = rng.randint(1, caps.s_max)
    j = rng.randint(1, n) if kind == "rnc" else None
    return GeneratorSpec(kind, n, s, caps.m_max, seed, j=j)


def _line_spec(rng: random.Random, caps: Caps) -> GeneratorSpec | None:
    n = rng.randint(min(2, caps.n_max), caps.n_max)
    return GeneratorSpec("line", n, rng.randint(min(2, caps.s_max), caps.s_max), caps.m_max, rng.getrandbits(63))


def _two_lines_spec(rng: random.Random, caps: Caps) -> GeneratorSpec | None:
    n = _pick_n(rng, caps, 3)
    if n is None or caps.s_max < 4:
        return None
    a = rng.randint(2, min(4, caps.s_max - 2))
    b = rng.randint(2, min(4, caps.s_max - a))
    return GeneratorSpec("two_lines", n, max_multiplicity=caps.m_max, seed=rng.getrandbits(63), line_counts=(a, b))


def _rnc_spec(rng: random.Random, caps: Caps) -> GeneratorSpec | None:
    top = min(3, caps.n_max)
    if top < 2:
        return None
    j = rng.randint(2, top)
    s = rng.randint(min(j + 1, caps.s_max), caps.s_max)
    return GeneratorSpec("rnc", j, s, caps.m_max, rng.getrandbits(63), j=j)


_Check = Callable[[GeneratedScheme, Caps, int], Verdict]

_RUNNERS: dict[str, tuple[Callable[[random.Random, Caps], GeneratorSpec | None], _Check]] = {
    "lower-bound": (_mixed_spec, lambda case, caps, seed: check_lower_bound(case.scheme, caps.point_cap)),
    "subset-mono": (_mixed_spec, lambda case, caps, seed: check_subset_monotonicity(case.scheme, 1, seed)),
    "mult-mono": (_mixed_spec, lambda case, caps, seed: check_multiplicity_monotonicity(case.scheme, 1, seed)),
    "exact-line": (_line_spec, lambda case, caps, seed: check_exact_formula(case, caps.point_cap)),
    "exact-two-lines": (_two_lines_spec, lambda case, caps, seed: check_exact_formula(case, caps.point_cap)),
    "exact-rnc": (_rnc_spec, lambda case, caps, seed: check_exact_formula(case, caps.point_cap)),
    "hilbert-invariants": (_mixed_spec, lambda case, caps, seed: check_hilbert_invariants(case.scheme)),
}


@dataclass
class VerificationReport:
    suite: list[str]
    seed: int
    caps: dict
    trials: int
    field: str
    cases: list[dict]

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.cases:
            counts[c["verdict"]] += 1
        return counts

    @property
    def passed(self) -> bool:
        return self.summary["fail"] == 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "caps": self.caps,
            "trials": self.trials,
            "field": self.field,
            "cases": self.cases,
            "summary": self.summary,
        }


def _spec_json(spec: GeneratorSpec) -> dict:
    out = asdict(spec)
    if out["line_counts"] is not None:
        out["line_counts"] = list(out["line_counts"])
    return out


def _certify(check: _Check, spec: GeneratorSpec, scheme: FatPointScheme, caps: Caps, sub_seed: int) -> Verdict | None:
    """Re-run a failed prime-field check over Q, if Q gives the same configuration."""
    lifted = generate(spec, Field.rational())
    try:
        same = lifted.scheme.with_field(scheme.field) == scheme
    except MalformedInputError:
        same = False
    return check(lifted, caps, sub_seed) if same else None


def run_case(name: str, spec: GeneratorSpec, field: Field, caps: Caps, sub_seed: int, timing: bool = False) -> dict:
    check = _RUNNERS[name][1]
    started = time.perf_counter()
    record: dict = {"kind": name, "generator": _spec_json(spec)}
    try:
        case = generate(spec, field)
        scheme = case.scheme
        verdict = check(case, caps, sub_seed)
        if not verdict.passed and field.is_prime:
            certified = _certify(check, spec, scheme, caps, sub_seed)
            if certified is not None and certified.passed:
                verdict.detail["characteristic_anomaly"] = {"prime_reg": verdict.reg, "prime_value": verdict.value}
                verdict = Verdict(True, certified.reg, certified.value, verdict.detail)
        record.update(
            scheme=scheme.to_document(),
            digest=scheme.digest(),
            reg=verdict.reg,
            bound_or_formula=verdict.value,
            verdict="pass" if verdict.passed else "fail",
            detail=verdict.detail,
        )
    except ResourceCapError as exc:
        record.update(scheme=None, digest=None, reg=None, bound_or_formula=None, verdict="skipped", detail={"error": str(exc)})
    record["millis"] = round((time.perf_counter() - started) * 1000, 3) if timing else None
    return record


def run_suite(
    selection: Sequence[str],
    trials: int = 10,
    seed: int = 0,
    caps: Caps = Caps(),
    field: Field = DEFAULT_FIELD,
    timing: bool = False,
) -> VerificationReport:
    """Run ``trials`` seeded cases for every selected check, in a fixed order."""
    unknown = [name for name in selection if name not in SUITES]
    if unknown:
        raise MalformedInputError(f"unknown case name(s): {', '.join(unknown)}")
    if trials < 0:
        raise MalformedInputError("trials must be non-negative")
    ordered = [name for name in SUITES if name in selection]
    cases = []
    for name in ordered:
        rng = random.Random(f"{name}:{seed}")
        for _ in range(trials):
            spec = _RUNNERS[name][0](rng, caps)
            sub_seed = rng.getrandbits(63)
            if spec is None:
                cases.append({"kind": name, "generator": None, "scheme": None, "digest": None, "reg": None,
                              "bound_or_formula": None, "verdict": "skipped",
                              "detail": {"error": "caps exclude this family"}, "millis": None})
                continue
            cases.append(run_case(name, spec, field, caps, sub_seed, timing))
    return VerificationReport(ordered, seed, asdict(caps), trials, str(field), cases)


def touched_schemes(report: VerificationReport | dict) -> list[FatPointScheme]:
    """Every scheme whose regularity a report depends on, derived ones included."""
    data = report.to_json() if isinstance(report, VerificationReport) else report

    out = []
    for case in data["cases"]:
        if case["scheme"] is None:
            continue
        scheme = load_scheme(case["scheme"])
        out.append(scheme)
        for sample in (case.get("detail") or {}).get("samples", []):
            if "subset" in sample:
                out.append(restrict(scheme, sample["subset"]))
            else:
                out.append(reduce_multiplicities(scheme, sample["m"]))
    return out

