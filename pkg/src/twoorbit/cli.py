"""Command line: ``census``, ``verify``, ``analyze`` and ``export``."""
from __future__ import annotations

import argparse
import json
import sys

from .census import (
    OutOfScope,
    analyze_dict,
    build_named,
    census_names,
    export,
    rows_to_tsv,
    run_census,
    verify_theorems,
)


def _cmd_census(args) -> int:
    names = census_names(include_large=not args.skip_large)
    rows = run_census(names, k=args.quotient_k)
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(rows_to_tsv(rows))
    return 0


def _cmd_verify(args) -> int:
    res = verify_theorems(only=args.only, k=args.quotient_k)
    sys.stdout.write(res.report)
    return res.status


def _cmd_analyze(args) -> int:
    with open(args.file) as fh:
        data = json.load(fh)
    sys.stdout.write(json.dumps(analyze_dict(data), sort_keys=True, indent=1) + "\n")
    return 0


def _cmd_export(args) -> int:
    try:
        obj = build_named(args.name)
    except OutOfScope as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    text = export(obj, args.format, args.name, k=args.quotient_k)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoorbit", description=__doc__)
    p.add_argument("--quotient-k", type=int, default=3, help="torus quotient scale for tilings (>= 3)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="report every registered object")
    c.add_argument("--format", choices=["tsv", "json"], default="tsv")
    c.add_argument("--skip-large", action="store_true", help="leave out the 600-cell family")
    c.set_defaults(func=_cmd_census)

    v = sub.add_parser("verify", help="compare the census with the expected rows")
    v.add_argument("--only", metavar="NAME")
    v.set_defaults(func=_cmd_verify)

    a = sub.add_parser("analyze", help="report on a lattice JSON file")
    a.add_argument("file")
    a.set_defaults(func=_cmd_analyze)

    e = sub.add_parser("export", help="write an object as json, off or tsv")
    e.add_argument("name")
    e.add_argument("--format", choices=["json", "off", "tsv"], required=True)
    e.add_argument("-o", "--output")
    e.set_defaults(func=_cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.quotient_k < 3:
        sys.stderr.write("--quotient-k must be at least 3\n")
        return 2
    try:
        return args.func(args)
    except (KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
