"""Where does sweep time go? Lists the slowest runs of a results CSV and the
share of total time they account for.

    python scripts/flood_census.py runs/desk/results.csv --top 20
"""

import argparse
from collections import Counter

from rstar_grid.experiment import read_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--top", type=int, default=20)
    args = ap.parse_args()
    recs = sorted(read_csv(args.csv), key=lambda r: -r.time_ms)
    total = sum(r.time_ms for r in recs)
    top = recs[:args.top]
    print(f"{len(recs)} runs, {total / 1000:.1f} s total; top {len(top)} take "
          f"{sum(r.time_ms for r in top) / total:.0%}")
    free = max(r.sparse_states for r in recs)
    for r in top:
        print(f"{r.map_id:12s} {r.series:13s} {r.value:5d}  {r.time_ms:9.1f} ms  "
              f"sparse {r.sparse_states:6d} ({r.sparse_states / free:.0%})  failed local {r.failed_local}")
    print("maps:", dict(Counter(r.map_id for r in top).most_common()))


if __name__ == "__main__":
    main()
