"""Command-line front end.

Exit codes: 0 all checks passed, 1 operational or usage error, 2 a
mathematical witness was found (its DG file is written when ``--out`` is
given).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from snw import bounds as bnd
from snw import campaigns
from snw.digraph import read_dg, write_dg
from snw.enumeration import GeneratorConfig, enumerate_graphs, iter_graphs, stats_json, write_batch
from snw.errors import NotACounterexample, SNWError
from snw.seymour import analyze, minimal_reduce, subset_inequality_check

log = logging.getLogger("snw")


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; decimals are refused."""
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(f"lambda must be an exact rational p/q, got {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"lambda must be positive, got {text!r}")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.suffix == "":
        path.mkdir(parents=True, exist_ok=True)
        path = path / filename
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, newline="\n")


def _witness_dir(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    return (path if path.suffix == "" else path.parent) / "witnesses"


# --- commands ------------------------------------------------------------------


def cmd_bounds(args) -> int:
    if args.m_max < 2:
        raise UsageError("--m-max must be at least 2")
    rows = bnd.bounds_table(args.m_max, args.tol)
    if args.format == "json":
        _emit(json.dumps(bnd.table_to_json(rows, args.tol), indent=2) + "\n", args.out, "bounds.json")
    else:
        _emit(bnd.table_to_csv(rows), args.out, "bounds.csv")
    csy = bnd.csy_root(args.tol)
    if rows[0].snc_root < csy:
        print(
            f"note: m=2 root {rows[0].snc_root:.12g} is below the Chen-Shen-Yuster constant {csy:.12g}",
            file=sys.stderr,
        )
    return 0


def _report(report: campaigns.CampaignReport, args, filename: str) -> int:
    _emit(report.dumps(), args.out, filename)
    return report.exit_code


def cmd_verify_snc(args) -> int:
    report = campaigns.verify_snc(
        args.n, args.tier, args.samples, args.seed, args.p, args.jobs, _witness_dir(args.out)
    )
    return _report(report, args, "verify-snc.json")


def cmd_verify_subset(args) -> int:
    report = campaigns.verify_subset(
        args.n, args.tier, args.samples, args.seed, args.p, args.jobs, _witness_dir(args.out)
    )
    return _report(report, args, "verify-subset.json")


def cmd_verify_mfree(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    report = campaigns.verify_mfree(
        args.m, args.n, args.samples, args.seed, args.p, args.exhaustive_max, args.jobs,
        _witness_dir(args.out),
    )
    return _report(report, args, "verify-mfree.json")


def cmd_verify_lemma(args) -> int:
    if args.lam is None:
        raise UsageError("--lambda is required")
    report = campaigns.verify_lemma(
        args.lam, args.n, args.samples, args.n_sample_max, args.seed, args.jobs, _witness_dir(args.out)
    )
    return _report(report, args, "verify-lemma.json")


def cmd_verify_inregular(args) -> int:
    report = campaigns.verify_inregular(args.n, args.jobs, _witness_dir(args.out))
    return _report(report, args, "verify-inregular.json")


def cmd_reduce(args) -> int:
    if args.lam is None:
        raise UsageError("--lambda is required")
    D = read_dg(args.input)
    try:
        R, trace = minimal_reduce(D, args.lam)
    except NotACounterexample as exc:
        print(f"NotACounterexample: {exc}", file=sys.stderr)
        return 1
    violation = subset_inequality_check(R, args.lam)
    summary = {
        "result": "PASS" if violation is None else "VIOLATION",
        "lambda": str(args.lam),
        "n_in": D.n,
        "n_out": R.n,
        "violating_subset": None if violation is None else sorted(violation),
    }
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_dg(out / "reduced.dg", R)
        (out / "trace.json").write_text(json.dumps(trace.to_json(), indent=2) + "\n")
        if violation is not None:
            write_dg(out / "witness.dg", R)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0 if violation is None else 2


def cmd_analyze(args) -> int:
    report = analyze(read_dg(args.input))
    _emit(report.dumps(), args.out, "report.json")
    return 0


def cmd_enumerate(args) -> int:
    filters = set(args.filter or ())
    filters.discard("all")
    config = GeneratorConfig(args.n, m=args.m, filters=frozenset(filters))
    if args.out is not None:
        out = Path(args.out)
        write_batch(out, iter_graphs(config))
        stats = enumerate_graphs(config, _count_only)
        (out / "stats.json").write_text(stats_json(stats))
    else:
        stats = enumerate_graphs(config, _count_only, jobs=args.jobs)
        sys.stdout.write(stats_json(stats))
    return 0


def _count_only(index, D):
    return None


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snw", description="Second neighborhood verification engine")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default=None):
        p.add_argument("--n", type=positive_int, default=n_default, required=n_default is None)
        p.add_argument("--jobs", type=positive_int, default=campaigns.default_jobs())
        p.add_argument("--out", default=None, help="output file or directory")
        return p

    p = sub.add_parser("bounds", help="table of root bounds")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=bnd.DEFAULT_TOL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    for name, func, text in (
        ("verify-snc", cmd_verify_snc, "check every graph has a Seymour vertex"),
        ("verify-subset", cmd_verify_subset, "check every graph has a subset witness"),
    ):
        p = common(sub.add_parser(name, help=text))
        p.add_argument("--tier", choices=("full", "extended", "sample"), default="full")
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--p", type=float, default=0.5, help="edge probability for the sample tier")
        p.set_defaults(func=func)

    p = common(sub.add_parser("verify-mfree", help="check the m-free root bound"))
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--exhaustive-max", type=int, default=campaigns.FULL_TIER_MAX_N)
    p.set_defaults(func=cmd_verify_mfree)

    p = common(sub.add_parser("verify-lemma", help="reduce lambda-counterexamples and test the subset inequality"), n_default=campaigns.FULL_TIER_MAX_N)
    p.add_argument("--lambda", dest="lam", type=parse_rational, default=None)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--n-sample-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_lemma)

    p = common(sub.add_parser("verify-inregular", help="subset witnesses on in-regular graphs"), n_default=6)
    p.set_defaults(func=cmd_verify_inregular)

    p = sub.add_parser("reduce", help="minimal reduction of a lambda-counterexample")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=parse_rational, default=None)
    p.add_argument("--out", default=None, help="directory for reduced.dg and trace.json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("analyze", help="JSON report for one DG file")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = common(sub.add_parser("enumerate", help="count or write filtered graph universes"))
    p.add_argument(
        "--filter", action="append",
        choices=("all", "tournament", "in_regular", "strongly_connected", "m_free"),
    )
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for witnesses
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SNWError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
