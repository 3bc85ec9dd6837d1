"""Run the generate/orient/draw sweep and print summary statistics.

Usage: python scripts/improvement_sweep.py [--quick] [--out sweep.csv]
       [--time-limit-s 60] [--workers 2]
"""

import argparse

from storient.bench import run_benchmark, write_csv
from storient.solver import SolveBudget


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--out", default="sweep.csv")
    parser.add_argument("--time-limit-s", type=float, default=60.0)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--seeds", type=int, default=10)
    args = parser.parse_args()

    if args.quick:
        n_list, seeds = [20, 40, 60], 3
    else:
        n_list, seeds = [100, 200, 300], args.seeds
    records = run_benchmark(
        n_list,
        [0.2, 0.5, 0.8],
        seeds,
        SolveBudget(time_limit_s=args.time_limit_s),
        workers=args.workers,
    )
    write_csv(records, args.out)

    print(f"{len(records)} records -> {args.out}")
    for p in (0.2, 0.5, 0.8):
        rows = [r for r in records if r.p_iv == p]
        mean = sum(r.improvement_pct for r in rows) / len(rows)
        better = sum(1 for r in rows if r.area_better)
        proven = sum(1 for r in rows if r.proven)
        print(
            f"  p_iv={p}: mean improvement {mean:5.1f}%  "
            f"smaller drawings {better}/{len(rows)}  proven {proven}/{len(rows)}"
        )
    mean = sum(r.improvement_pct for r in records) / len(records)
    print(f"  overall mean improvement {mean:.1f}%")


if __name__ == "__main__":
    main()
