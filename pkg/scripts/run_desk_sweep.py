"""Build the desk-scale corpus (201x201, 10 maps per family), run the three
parameter series with 3 repetitions and print the summary table.

    python scripts/run_desk_sweep.py --out runs/desk
"""

import argparse
import logging
import time
from pathlib import Path

from rstar_grid.experiment import aggregate, build_corpus, default_series, flatten, format_summary, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/desk")
    ap.add_argument("--side", type=int, default=201)
    ap.add_argument("--maps", type=int, default=10)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    out = Path(args.out)
    manifest = out / "corpus" / "manifest.txt"
    if not manifest.exists():
        for family in ("rects", "tetris"):
            build_corpus(manifest.parent, family, args.side, args.side, 0.30, args.maps, args.seed)
    dist = 10 * (args.side - 1)
    configs = flatten(default_series(dist))
    t0 = time.perf_counter()
    records = run_sweep(manifest, configs, args.reps, args.seed, workers=args.workers)
    logging.info("%d runs in %.1f s", len(records), time.perf_counter() - t0)
    write_csv(out / "results.csv", records)
    summary = format_summary(aggregate(records))
    (out / "summary.txt").write_text(summary)
    print(summary, end="")


if __name__ == "__main__":
    main()
