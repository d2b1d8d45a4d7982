#!/usr/bin/env python
"""Reproduce the bundled reference grids and print side-by-side diffs.

Example:
    python scripts/run_tables.py --tables T1 T5 --reps 1000 --jobs 8 --out results/
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys

from bmchange import montecarlo as mc


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tables", nargs="+", default=list(mc.TABLE_IDS), choices=list(mc.TABLE_IDS))
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--reduced", action="store_true", help="Small subset of each grid.")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=pathlib.Path, default=None, help="Directory for CSV/JSON dumps.")
    args = ap.parse_args(argv)

    for table_id in args.tables:
        rows, reports = mc.table_runner(
            table_id,
            reduced=args.reduced,
            replications=args.reps,
            master_seed=args.seed,
            jobs=args.jobs,
        )
        wall = sum(r.wall_time_s for r in reports)
        print(f"== {table_id} ({len(reports)} cells, {args.reps} reps, {wall:.1f}s) ==")
        print(f"{'xi':>5} {'n':>4} {'test':<12} {'sim%':>7} {'ref%':>7} {'diff':>7}")
        for row in rows:
            ref = "-" if row["reference_pct"] is None else f"{row['reference_pct']:7.1f}"
            diff = "-" if row["diff_pct"] is None else f"{row['diff_pct']:+7.1f}"
            print(f"{row['xi']:5g} {row['n']:4d} {row['test']:<12} {row['simulated_pct']:7.1f} {ref:>7} {diff:>7}")
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{table_id}.csv").write_text(mc.rows_to_csv(rows))
            (args.out / f"{table_id}.json").write_text(json.dumps(rows, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
