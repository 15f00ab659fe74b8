"""Command-line interface: ``cmgirth <command> ...``.

Exit codes: 0 all checks pass, 1 a bound or certificate failed, 2 bad input
(or a refused computation), 3 out-of-hypothesis cases under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .casefile import format_case, read_case
from .errors import CmGirthError, InvariantViolation
from .girth import (FAIL, OUT, analyze_case, forster_swan_bound, generate_corpus, global_bound,
                    run_corpus, scheme_intersection_bound)
from .groebner import Ideal
from .hilbert import QuotientPresentation, dimension, multiplicity
from .noether import noether_position
from .poly import DEGREVLEX
from .resolve import DEFAULT_MAX_RANK, free_resolution

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, path):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


CSV_INVARIANTS = ("dim", "depth", "pd", "cm", "e", "N", "paramdeg_upper", "f", "type_A",
                  "height", "mu", "type", "cm_quotient")


def records_csv(records, seed) -> str:
    """One row per (case, check)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case_id", "field", "vars", "order", "status", *CSV_INVARIANTS,
                "check", "lhs", "rhs", "pass", "seed", "version"])
    for r in records:
        d = r.to_dict(seed)
        head = [d["case_id"], d["ring"]["field"], " ".join(d["ring"]["vars"]), d["ring"]["order"],
                d["status"]] + ["" if d["invariants"][k] is None else d["invariants"][k]
                                for k in CSV_INVARIANTS]
        for c in d["checks"]:
            w.writerow(head + [c["name"], c["lhs"], c["rhs"], c["pass"], seed, __version__])
    return buf.getvalue()


def _exit_for(statuses, strict: bool) -> int:
    if FAIL in statuses:
        return EXIT_VIOLATION
    if strict and OUT in statuses:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def _quotient(case):
    ring = case.ring.with_order(DEGREVLEX)
    return QuotientPresentation(ring, Ideal(ring, [g.in_ring(ring) for g in case.I]))


# ------------------------------------------------------------------ commands

def cmd_invariants(args) -> int:
    rec = analyze_case(read_case(args.case), args.seed, args.trials, args.max_rank)
    _emit(dump_json(rec.to_dict(args.seed)), args.json)
    if args.csv:
        Path(args.csv).write_text(records_csv([rec], args.seed), encoding="utf-8")
    return _exit_for({rec.status}, args.strict)


def cmd_verify(args) -> int:
    rec = analyze_case(read_case(args.case), args.seed, args.trials, args.max_rank)
    lines = [f"{rec.case_id}: {rec.status}"]
    for c in rec.checks:
        lines.append(f"  {c.name:<24} {c.lhs} <= {c.rhs}  {'pass' if c.passed else 'FAIL'}")
    for e in rec.expectations:
        lines.append(f"  expect {e['key']:<17} {e['actual']} == {e['expected']}  "
                     f"{'pass' if e['pass'] else 'FAIL'}")
    for n in rec.notes:
        lines.append(f"  note: {n}")
    print("\n".join(lines))
    if args.json:
        _emit(dump_json(rec.to_dict(args.seed)), args.json)
    if args.csv:
        Path(args.csv).write_text(records_csv([rec], args.seed), encoding="utf-8")
    return _exit_for({rec.status}, args.strict)


def cmd_noether(args) -> int:
    case = read_case(args.case)
    nd = noether_position(_quotient(case).ideal, args.seed)
    _emit(dump_json({"case_id": case.case_id, "seed": args.seed, "version": __version__,
                     **nd.summary()}), args.json)
    return EXIT_OK


def cmd_resolve(args) -> int:
    case = read_case(args.case)
    Q = _quotient(case)
    if args.quotient_by_a:
        if case.a is None:
            raise CmGirthError("the case has no `ideal a:` line")
        Q = Q.add([g.in_ring(Q.ring) for g in case.a])
    res = free_resolution(Q, args.max_rank)
    if args.json:
        _emit(dump_json({"case_id": case.case_id, "betti": res.betti,
                         "graded_betti": [[i, j, b] for (i, j), b in sorted(res.graded_betti().items())],
                         "minimal": res.minimal, "version": __version__}), args.json)
    print(res.betti_table())
    return EXIT_OK


def cmd_hilbert(args) -> int:
    case = read_case(args.case)
    Q = _quotient(case)
    s = Q.series
    out = {"case_id": case.case_id, "series": str(s), "numerator": list(s.reduced_numerator),
           "dim": dimension(Q),
           "e": multiplicity(Q) if not Q.is_zero_ring() else None,
           "hilbert_function": s.expansion(args.upto), "version": __version__}
    _emit(dump_json(out), args.json)
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.generate is not None:
        cases = generate_corpus(args.generate, args.seed)
    elif args.directory:
        root = Path(args.directory)
        if not root.is_dir():
            raise CmGirthError(f"{root}: not a directory")
        cases = [read_case(p) for p in sorted(root.glob("*.case"))]
    else:
        raise CmGirthError("corpus needs a directory or --generate N")
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        for c in cases:
            (out / f"{c.case_id}.case").write_text(format_case(c), encoding="utf-8")
    report = run_corpus(cases, args.seed, args.trials, args.max_rank, args.jobs)
    if args.json:
        _emit(dump_json(report.to_dict()), args.json)
    if args.csv:
        Path(args.csv).write_text(records_csv(report.records, args.seed), encoding="utf-8")
    counts = report.counts
    print(" ".join(f"{k}={counts[k]}" for k in sorted(counts)))
    for r in report.records:
        if r.status == FAIL:
            print(f"FAIL {r.case_id}: " + ", ".join(c.name for c in r.checks if not c.passed))
    for e in report.errors:
        print(f"ERROR {e['case_id']}: {e['error']}")
    code = _exit_for({r.status for r in report.records}, args.strict)
    if report.errors and code == EXIT_OK:
        code = EXIT_INPUT
    return code


def cmd_bound(args) -> int:
    if args.formula == "global":
        value = global_bound(args.d, args.N, args.h, args.tau)
    elif args.formula == "forster-swan":
        value = forster_swan_bound(args.F, args.d, args.dim)
    else:
        value = scheme_intersection_bound(args.f, args.d, args.variant)
    print(value)
    return EXIT_OK


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", default=0, type=int, help="random seed (default 0)")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--csv", metavar="PATH", help="write a CSV projection here")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when a case is out of hypothesis")
    common.add_argument("--max-rank", type=int, default=DEFAULT_MAX_RANK,
                        help="largest free module allowed in a resolution")
    common.add_argument("--trials", type=int, default=16, help="parameter-degree trials")

    p = argparse.ArgumentParser(prog="cmgirth", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, text in (("invariants", cmd_invariants, "full case record as JSON"),
                           ("verify", cmd_verify, "bound checks for one case"),
                           ("noether", cmd_noether, "Noether normalization summary"),
                           ("hilbert", cmd_hilbert, "Hilbert series, dimension, multiplicity")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("case", help="case file")
        sp.set_defaults(func=fn)
        if name == "hilbert":
            sp.add_argument("--upto", type=int, default=10, help="Hilbert function up to degree")

    sp = sub.add_parser("resolve", parents=[common], help="Betti table of the minimal resolution")
    sp.add_argument("case")
    sp.add_argument("--quotient-by-a", action="store_true", help="resolve S/(I + a) instead")
    sp.set_defaults(func=cmd_resolve)

    sp = sub.add_parser("corpus", parents=[common], help="sweep a directory or a generated corpus")
    sp.add_argument("directory", nargs="?", help="directory of *.case files")
    sp.add_argument("--generate", type=int, metavar="N", help="generate N random cases")
    sp.add_argument("--emit", metavar="DIR", help="also write the cases as files")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("bound", parents=[common], help="closed-form bound calculators")
    sp.add_argument("formula", choices=("global", "forster-swan", "thm1-1"))
    sp.add_argument("--d", type=int, required=True, help="dimension")
    sp.add_argument("--N", type=int, default=1, help="module generator count")
    sp.add_argument("--h", type=int, default=1, help="height (1 or 2)")
    sp.add_argument("--tau", type=int, default=1, help="Cohen-Macaulay type")
    sp.add_argument("--F", type=int, default=1, help="local generator bound")
    sp.add_argument("--dim", type=int, default=0, help="dimension of A/a")
    sp.add_argument("--f", type=int, default=1, help="degree of the cover")
    sp.add_argument("--variant", choices=("general", "cm", "ee"), default="general")
    sp.set_defaults(func=cmd_bound)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"cmgirth: certificate failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except CmGirthError as exc:
        print(f"cmgirth: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
