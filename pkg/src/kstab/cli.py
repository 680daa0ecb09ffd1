"""Command line entry point: ``kstab compute``, ``kstab verify`` and ``kstab list``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import DEFAULT_CORPUS
from .cases import FAMILIES, discover, load_case
from .errors import KStabError
from .runner import ERROR, MISMATCH, format_table, reports_json, run_case, run_corpus


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kstab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="run a single case file")
    c.add_argument("--case", required=True, help="path to a case .toml file")
    c.add_argument("--json", action="store_true", help="emit a JSON report")
    c.add_argument("--oracle", action="store_true", help="also run the float midpoint oracle")
    c.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")

    v = sub.add_parser("verify", help="run every case in a corpus directory")
    v.add_argument("--corpus", default=str(DEFAULT_CORPUS), help="corpus directory (default: bundled)")
    v.add_argument("--family", choices=FAMILIES)
    v.add_argument("--json", action="store_true")
    v.add_argument("--oracle", action="store_true")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--no-timing", action="store_true")

    ls = sub.add_parser("list", help="list the cases of a corpus")
    ls.add_argument("--corpus", default=str(DEFAULT_CORPUS))
    return p


def _compute(args: argparse.Namespace) -> int:
    try:
        case = load_case(args.case)
    except KStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_case(case, oracle=args.oracle)
    timing = not args.no_timing
    if args.json:
        print(json.dumps(report.to_dict(timing), indent=2, sort_keys=True))
    else:
        print(format_table([report], timing=timing))
    if report.verdict in (MISMATCH, ERROR) or report.oracle_ok is False:
        return 1
    return 0


def _verify(args: argparse.Namespace) -> int:
    res = run_corpus(args.corpus, family=args.family, oracle=args.oracle, jobs=max(1, args.jobs))
    for e in res.errors:
        print(f"error: {e}", file=sys.stderr)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    timing = not args.no_timing
    if args.json:
        print(reports_json(res.reports, timing=timing))
    else:
        print(format_table(res.reports, timing=timing))
        counts: dict[str, int] = {}
        for r in res.reports:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        print("summary: " + ", ".join(f"{k}={counts[k]}" for k in sorted(counts)) + f"; status {res.status}")
    return res.status


def _list(args: argparse.Namespace) -> int:
    try:
        paths = discover(args.corpus)
    except KStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status = 0
    for p in paths:
        try:
            c = load_case(p)
        except KStabError as exc:
            print(f"{p.name}: {exc}", file=sys.stderr)
            status = 2
            continue
        print(f"{c.id:<24} {c.family:<4} {c.kind:<10} {c.description}")
    return status


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handler = {"compute": _compute, "verify": _verify, "list": _list}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
