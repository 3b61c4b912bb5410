import json

import pytest
from conftest import FIVE_DOUBLE, FP, scheme

from fatpoints import GeneratorSpec, bounds, generate, verify
from fatpoints.errors import MalformedInputError
from fatpoints.verify import (
    SUITES,
    Caps,
    check_exact_formula,
    check_exact_formulas,
    check_hilbert_invariants,
    check_lower_bound,
    check_multiplicity_monotonicity,
    check_subset_monotonicity,
    run_suite,
    touched_schemes,
)

COLLINEAR = [(1, 0, 0), (0, 1, 0), (1, 1, 0)]


def test_check_lower_bound_examples():
    v = check_lower_bound(scheme(COLLINEAR, [2, 2, 2]))
    assert v.passed and v.reg == v.value == 5
    v = check_lower_bound(scheme(FIVE_DOUBLE, [2] * 5))
    assert v.passed and v.reg == v.value == 5
    v = check_lower_bound(scheme(FIVE_DOUBLE[:4], [1] * 4))
    assert v.passed and v.reg >= v.detail["d_values"]["1"]["value"] == 1


def test_subset_monotonicity_examples():
    sc = scheme(COLLINEAR, [2, 2, 2])
    v = check_subset_monotonicity(sc, trials=4, seed=1)
    assert v.passed and v.reg == 5
    regs = {tuple(x["subset"]): x["reg"] for x in v.detail["samples"]}
    assert regs[(0, 1, 2)] == 5 and regs[(0,)] == 1
    from fatpoints import regularity_index, restrict

    assert regularity_index(restrict(sc, [0, 1])) == 3


def test_multiplicity_monotonicity_examples():
    sc = scheme(COLLINEAR, [2, 2, 2])
    v = check_multiplicity_monotonicity(sc, trials=3, seed=2)
    assert v.passed
    vectors = [tuple(x["m"]) for x in v.detail["samples"]]
    assert vectors[0] == (2, 2, 2)
    assert {(1, 2, 2), (2, 1, 2), (2, 2, 1)} <= set(vectors)
    from fatpoints import reduce_multiplicities, regularity_index

    assert regularity_index(reduce_multiplicities(sc, [1, 1, 1])) == 2
    five = scheme(FIVE_DOUBLE, [2] * 5)
    assert regularity_index(reduce_multiplicities(five, [2, 2, 2, 2, 0])) <= 5


def test_exact_formula_examples():
    line = generate(GeneratorSpec("line", 2, 3, 3, seed=3))
    v = check_exact_formula(line)
    assert v.passed and v.reg == v.value
    rnc = generate(GeneratorSpec("rnc", 2, 5, 2, seed=8, j=2))
    assert check_exact_formula(rnc).passed
    lines = generate(GeneratorSpec("two_lines", 3, max_multiplicity=2, seed=1, line_counts=(3, 2)))
    v = check_exact_formula(lines)
    assert v.passed and v.detail["classified"] == "two_disjoint_lines"
    assert check_exact_formulas([line, rnc, lines]).passed
    with pytest.raises(MalformedInputError):
        check_exact_formula(generate(GeneratorSpec("generic", 2, 3)))


def test_hilbert_invariants_example():
    v = check_hilbert_invariants(scheme(FIVE_DOUBLE, [2] * 5))
    assert v.passed and v.detail["profile"] == [1, 3, 6, 10, 14, 15]


def test_empty_selection_passes():
    report = run_suite([], trials=5)
    assert report.cases == [] and report.passed


def test_exact_line_suite_example():
    report = run_suite(["exact-line"], trials=10, seed=42)
    assert [c["verdict"] for c in report.cases] == ["pass"] * 10


def test_unknown_suite_rejected():
    with pytest.raises(MalformedInputError):
        run_suite(["exact-circle"])


def test_report_schema_and_order():
    report = run_suite(list(reversed(SUITES)), trials=1, seed=3).to_json()
    assert list(report) == ["suite", "seed", "caps", "trials", "field", "cases", "summary"]
    assert report["suite"] == list(SUITES)
    assert [c["kind"] for c in report["cases"]] == list(SUITES)
    for case in report["cases"]:
        assert {"kind", "scheme", "digest", "reg", "bound_or_formula", "verdict", "millis"} <= case.keys()
        assert case["millis"] is None
    assert report["summary"] == {"pass": 7, "fail": 0, "skipped": 0}


def test_reports_are_reproducible():
    a = json.dumps(run_suite(SUITES, trials=2, seed=11).to_json())
    b = json.dumps(run_suite(SUITES, trials=2, seed=11).to_json())
    assert a == b
    c = json.dumps(run_suite(SUITES, trials=2, seed=12).to_json())
    assert a != c


def test_timing_flag_records_millis():
    report = run_suite(["exact-line"], trials=2, timing=True)
    assert all(isinstance(c["millis"], float) for c in report.cases)


def test_caps_exclude_families():
    report = run_suite(["exact-two-lines", "exact-rnc"], trials=2, caps=Caps(n_max=2, s_max=8))
    two_lines = [c for c in report.cases if c["kind"] == "exact-two-lines"]
    assert [c["verdict"] for c in two_lines] == ["skipped", "skipped"]
    assert report.summary["fail"] == 0


def test_resource_cap_is_recorded_not_fatal():
    report = run_suite(["lower-bound"], trials=6, seed=1, caps=Caps(s_max=8, point_cap=2))
    verdicts = {c["verdict"] for c in report.cases}
    assert "skipped" in verdicts and "fail" not in verdicts


def test_corrupted_formula_is_caught(monkeypatch):
    assert run_suite(["exact-line"], trials=5, seed=42).passed
    monkeypatch.setattr(bounds, "reg_collinear", lambda m: sum(m) - 2)
    report = run_suite(["exact-line"], trials=5, seed=42)
    assert not report.passed and report.summary["fail"] == 5


def test_prime_failure_certified_over_rationals(monkeypatch):
    real = verify.regularity_index

    def skewed(sc, cache=None):
        return real(sc) + (1 if sc.field.is_prime else 0)

    monkeypatch.setattr(verify, "regularity_index", skewed)
    report = run_suite(["exact-line"], trials=3, seed=5, field=FP)
    assert report.passed
    assert all("characteristic_anomaly" in c["detail"] for c in report.cases)
    # a discrepancy the rationals confirm stays a failure
    monkeypatch.setattr(verify, "regularity_index", lambda sc, cache=None: real(sc) + 1)
    report = run_suite(["exact-line"], trials=3, seed=5, field=FP)
    assert report.summary["fail"] == 3
    assert not any("characteristic_anomaly" in c["detail"] for c in report.cases)


def test_touched_schemes_include_derived():
    report = run_suite(["subset-mono", "mult-mono"], trials=2, seed=4)
    touched = touched_schemes(report)
    samples = sum(len(c["detail"]["samples"]) for c in report.cases)
    assert len(touched) == len(report.cases) + samples
    assert touched_schemes(report.to_json()) == touched


def test_headline_run_all_suites():
    report = run_suite(SUITES, trials=25, seed=7, caps=Caps(n_max=3, s_max=8, m_max=3))
    assert report.summary == {"pass": 175, "fail": 0, "skipped": 0}
