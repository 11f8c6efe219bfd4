"""Command line: generate corpora, plan single tasks, run sweeps, summarize results."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .experiment import aggregate, build_corpus, default_series, flatten, format_summary, read_csv, run_sweep, write_csv
from .grid import read_map
from .rstar import RStarParams, auto_params, rstar_plan, validate_params
from .search import weighted_astar


def _cell(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j but got {text!r}") from None
    return i, j


def _weight(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}") from None


def cmd_generate(args) -> int:
    entries = build_corpus(args.out, args.family, args.rows, args.cols, args.threshold, args.count, args.seed)
    print(f"wrote {len(entries)} {args.family} maps to {Path(args.out) / 'manifest.txt'}")
    return 0


def cmd_plan(args) -> int:
    grid = read_map(args.map)
    s, g = args.start, args.goal
    if args.algo in ("astar", "wastar"):
        w = 1 if args.algo == "astar" else (args.w if args.w is not None else 3)
        res = weighted_astar(grid, s, g, w)
        length = res.length if res.found else 0
        print(f"{int(res.found)} {length} {res.stats.cells} {res.stats.wall_time_ms:.3f}")
        return 0
    w = args.w if args.w is not None else 3
    if args.auto:
        params = auto_params(s, g, w)
    else:
        if None in (args.delta, args.k, args.m):
            print("rstar needs --delta, --k and --m, or --auto", file=sys.stderr)
            return 2
        params = RStarParams(args.delta, args.k, args.m, w)
        problems = validate_params(params)
        if problems:
            print("invalid parameters: " + "; ".join(problems), file=sys.stderr)
            return 2
    trace = open(args.trace, "w", encoding="utf-8", newline="\n") if args.trace else None
    try:
        res = rstar_plan(grid, s, g, params, args.seed, trace)
    finally:
        if trace is not None:
            trace.close()
    st = res.stats
    print(f"{int(res.found)} {st.length or 0} {st.cells} {st.wall_time_ms:.3f}")
    return 0


def cmd_sweep(args) -> int:
    configs = flatten(default_series(round(5000 * args.scale)))
    t0 = time.perf_counter()
    records = run_sweep(args.corpus, configs, args.reps, args.seed, workers=args.workers)
    write_csv(args.out, records)
    logging.info("%d runs in %.1f s -> %s", len(records), time.perf_counter() - t0, args.out)
    return 0


def cmd_report(args) -> int:
    rows = aggregate(read_csv(args.input))
    sys.stdout.write(format_summary(rows, args.series))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rstar-grid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a map corpus and manifest")
    p.add_argument("--family", choices=("rects", "tetris"), required=True)
    p.add_argument("--rows", type=int, default=201)
    p.add_argument("--cols", type=int, default=201)
    p.add_argument("--threshold", type=float, default=0.30)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plan", help="solve one task and print 'solved length cells time_ms'")
    p.add_argument("--map", required=True)
    p.add_argument("--start", type=_cell, required=True)
    p.add_argument("--goal", type=_cell, required=True)
    p.add_argument("--algo", choices=("astar", "wastar", "rstar"), default="rstar")
    p.add_argument("--w", type=_weight)
    p.add_argument("--delta", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--auto", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="run the m, K and delta series over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scale", type=float, default=0.4)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="summarize a results CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--series")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("RSTAR_LOG", "WARNING"), format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
