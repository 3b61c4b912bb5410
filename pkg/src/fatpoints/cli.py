"""Command line: ``fatpoints {reg,bound,exact,gen,verify}``.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds
from .errors import FatPointsError, ResourceCapError
from .exactmath import Field
from .hilbert import hilbert_profile, multiplicity, regularity_index
from .scheme import GENERATOR_KINDS, GeneratorSpec, generate, load_scheme
from .verify import SUITES, Caps, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field(text: str) -> Field:
    try:
        return Field.parse(text)
    except FatPointsError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _read_scheme(args):
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise FatPointsError(f"cannot read {args.config}: {exc.strerror}") from exc
    return load_scheme(text, getattr(args, "field", None))


def _emit(args, payload: dict, lines: list[str]):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def cmd_reg(args) -> int:
    scheme = _read_scheme(args)
    if args.table:
        profile = hilbert_profile(scheme)
        lines = [f"e = {profile.e}", "t\tH(t)"] + [f"{t}\t{h}" for t, h in profile.rows] + [f"reg = {profile.reg}"]
        payload = {"e": profile.e, "table": [list(r) for r in profile.rows], "reg": profile.reg}
    else:
        reg = regularity_index(scheme)
        lines = [f"reg = {reg}"]
        payload = {"e": multiplicity(scheme), "reg": reg}
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_bound(args) -> int:
    scheme = _read_scheme(args)
    report = bounds.lower_bound(scheme, max_j=args.max_j, cap=args.caps)
    lines = [
        f"D_{j} = {v.value}  witness {{{', '.join(map(str, v.witness))}}}" for j, v in report.d_values.items()
    ]
    lines.append(f"lower bound = {report.lower_bound} (j = {report.witness_j})")
    payload = {
        "d_values": {str(j): {"value": v.value, "witness": list(v.witness)} for j, v in report.d_values.items()},
        "lower_bound": report.lower_bound,
        "witness_j": report.witness_j,
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_exact(args) -> int:
    scheme = _read_scheme(args)
    case = bounds.classify(scheme)
    value = bounds.closed_form(scheme, case, cap=args.caps)
    if value is None:
        line = "no closed form; use reg"
    else:
        line = f"{case}: {value}"
    _emit(args, {"case": str(case), "parameters": case.parameters, "value": value}, [line])
    return EXIT_OK


def cmd_gen(args) -> int:
    counts = None
    if args.line_counts:
        try:
            counts = tuple(int(x) for x in args.line_counts.split(","))
        except ValueError:
            raise FatPointsError(f"bad --line-counts {args.line_counts!r}") from None
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        point_count=args.points,
        max_multiplicity=args.max_mult,
        seed=args.seed,
        j=args.j,
        line_counts=counts,
    )
    # build over Q so the document replays under any backend
    scheme = generate(spec, Field.rational()).scheme
    doc = scheme.to_document()
    doc["field"] = args.field.to_json()
    load_scheme(doc)  # reduction into the requested field must succeed
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _case_names(values: list[str]) -> list[str]:
    names: list[str] = []
    for value in values:
        for name in value.split(","):
            name = name.strip()
            if name == "all":
                names.extend(SUITES)
            elif name:
                names.append(name)
    unknown = sorted(set(names) - set(SUITES))
    if unknown:
        raise FatPointsError(f"unknown case name(s): {', '.join(unknown)}; choose from {', '.join(SUITES)} or all")
    return names


def cmd_verify(args) -> int:
    names = _case_names(args.cases or ["all"])
    caps = Caps(args.n_max, args.s_max, args.m_max, args.caps)
    report = run_suite(names, args.trials, args.seed, caps, args.field, timing=args.timing)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        for name in report.suite:
            mine = [c for c in report.cases if c["kind"] == name]
            counts = {v: sum(c["verdict"] == v for c in mine) for v in ("pass", "fail", "skipped")}
            print(f"{name}: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped")
            for k, c in enumerate(mine):
                if c["verdict"] == "fail":
                    print(f"  FAIL case {k}: reg = {c['reg']}, bound/formula = {c['bound_or_formula']}")
        s = report.summary
        print(f"total: {s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fatpoints", description="Regularity index of fat points in projective space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def config_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="configuration document (JSON)")
        p.add_argument("--field", type=_field, default=None, help="prime:<p> or rational (overrides the document)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = config_command("reg", cmd_reg, "regularity index via the rank oracle")
    p.add_argument("--table", action="store_true", help="print the Hilbert function up to reg")

    p = config_command("bound", cmd_bound, "lower bound max D_j with witnesses")
    p.add_argument("--max-j", type=int, default=None, help="only report D_1 .. D_max-j")
    p.add_argument("--caps", type=int, default=bounds.DEFAULT_POINT_CAP, help="subset enumeration point cap")

    p = config_command("exact", cmd_exact, "closed form for special supports")
    p.add_argument("--caps", type=int, default=bounds.DEFAULT_POINT_CAP, help="subset enumeration point cap")

    p = sub.add_parser("gen", help="write a seeded configuration document")
    p.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=int, default=3)
    p.add_argument("--line-counts", default=None, help="two_lines only: a,b points per line")
    p.add_argument("--j", type=int, default=None, help="rnc only: curve degree")
    p.add_argument("--max-mult", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", type=_field, default=Field.prime())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check bounds and closed forms against the oracle")
    p.add_argument("--cases", action="append", help=f"comma list from {', '.join(SUITES)} or all")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--s-max", type=int, default=8)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--caps", type=int, default=bounds.DEFAULT_POINT_CAP, help="subset enumeration point cap")
    p.add_argument("--field", type=_field, default=Field.prime())
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="record per-case milliseconds in JSON")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"fatpoints: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FatPointsError as exc:
        print(f"fatpoints: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
