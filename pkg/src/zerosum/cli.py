"""Command-line front end.  JSON goes to stdout (or --output); diagnostics and
the optional --pretty summary go to stderr.

Exit codes: 0 ok, 1 malformed input, 2 violations found, 3 scale refused or
budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import auditor, pell
from .detector import Construction, find_zero_sum_clique
from .errors import BudgetExceeded, ScaleRefused, ZeroSumError
from .weightings import (
    JChoice,
    SignedWeighting,
    bipartition_weighting,
    clique_negative_weighting,
    extremal_k4_free_weighting,
    j_for,
    wide_range_weighting,
)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATIONS, EXIT_SCALE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--parallelism", type=_positive, default=None,
                        help="worker threads for sweeps (default: CPU count)")
    common.add_argument("--pretty", action="store_true",
                        help="print a human summary to stderr")

    p = _Parser(prog="zerosum", description="Zero-sum cliques in edge weightings of K_n.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="build a weighting")
    g.add_argument("--kind", required=True,
                   choices=["clique-neg", "bipartition", "extremal-k4", "wide-range"])
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--a", type=_positive, help="part size |A| (|X| for wide-range)")
    g.add_argument("--j", choices=[c.value.lower() for c in JChoice],
                   help="remainder component for extremal-k4 (default: from n mod 4)")

    v = sub.add_parser("verify", parents=[common], help="search for a zero-sum K_m")
    v.add_argument("--m", type=_positive, required=True)
    v.add_argument("--input", "-i", help="weighting JSON file (default: stdin)")

    pl = sub.add_parser("pell", parents=[common], help="Pell solution streams")
    pl.add_argument("--family", required=True, choices=["neg-pell", "bal-clique"])
    pl.add_argument("--count", type=_positive, required=True)

    t = sub.add_parser("threshold", parents=[common], help="exhaustive K4 threshold audit")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--allow-large", action="store_true", help="permit the n=8 sweep")

    e = sub.add_parser("extremal", parents=[common], help="extremal family audit")
    e.add_argument("--n", type=int, required=True)

    b = sub.add_parser("balanced", parents=[common], help="balanced construction audit")
    b.add_argument("--kind", required=True, choices=["clique-neg", "bipartition"])
    b.add_argument("--n", type=_positive, required=True)
    b.add_argument("--m-max", type=_positive, required=True)
    b.add_argument("--budget", type=_positive, default=auditor.DEFAULT_BUDGET)
    b.add_argument("--strict-budget", action="store_true",
                   help="exit 3 instead of falling back to the closed form")

    i = sub.add_parser("intersect", parents=[common], help="S1 and S2 intersection scan")
    i.add_argument("--limit", type=_positive, required=True)
    return p


def _gen(args) -> SignedWeighting:
    if args.kind == "extremal-k4":
        j = JChoice(args.j.upper()) if args.j else j_for(args.n)
        return extremal_k4_free_weighting(args.n, j)
    if args.a is None:
        raise UsageError(f"--a is required for --kind {args.kind}")
    build = {
        "clique-neg": clique_negative_weighting,
        "bipartition": bipartition_weighting,
        "wide-range": wide_range_weighting,
    }[args.kind]
    return build(args.n, args.a)


def _read_weighting(path) -> SignedWeighting:
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    try:
        return SignedWeighting.from_json(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not JSON: {exc}") from None


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _summary(report: auditor.AuditReport) -> str:
    status = "OK" if report.ok else f"{report.violation_count} violation(s)"
    return f"{report.statement.value} {report.scope}={report.value}: {status}, scanned {report.total_scanned}"


def _dispatch(args) -> int:
    if args.command == "gen":
        w = _gen(args)
        _emit(args, w.to_json())
        if args.pretty:
            print(f"K_{w.n} r={w.r}: sum={sum(w.weights)}", file=sys.stderr)
        return EXIT_OK
    if args.command == "verify":
        w = _read_weighting(args.input)
        cert = find_zero_sum_clique(w, args.m)
        _emit(args, cert.to_json())
        if args.pretty:
            print(f"{cert.kind.value} m={cert.m} witness={cert.witness}", file=sys.stderr)
        return EXIT_OK
    if args.command == "pell":
        stream = pell.neg_pell_stream if args.family == "neg-pell" else pell.bal_clique_stream
        sols = [s.to_dict() for s in stream(args.count)]
        _emit(args, json.dumps(sols))
        if args.pretty:
            print(f"{len(sols)} solutions, last k={sols[-1]['k']}", file=sys.stderr)
        return EXIT_OK

    if args.command == "threshold":
        report = auditor.audit_threshold_k4(args.n, allow_large=args.allow_large,
                                            workers=args.parallelism)
    elif args.command == "extremal":
        report = auditor.audit_extremal_k4(args.n, workers=args.parallelism)
    elif args.command == "balanced":
        kind = Construction.CLIQUE_NEG if args.kind == "clique-neg" else Construction.BIPARTITION
        report = auditor.audit_balanced_construction(kind, args.n, args.m_max,
                                                     budget=args.budget,
                                                     strict=args.strict_budget)
    else:
        report = auditor.audit_s1s2(args.limit)
    _emit(args, report.to_json())
    if args.pretty:
        print(_summary(report), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except UsageError as exc:
        print(f"zerosum: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        if exc.report is not None:
            _emit(args, exc.report.to_json())
        print(f"zerosum: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except ScaleRefused as exc:
        print(f"zerosum: scale refused: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (ZeroSumError, ValueError, OSError) as exc:
        print(f"zerosum: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
