"""Regenerate the instance-density table over a configurable grid.

Usage: python scripts/density_table.py [--n 10 20 ... 1000] [--piv 0.2 ...]
       [--seeds 10]
"""

import argparse

from storient.generator import sample_stats


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--n",
        type=int,
        nargs="*",
        default=[10, 50, 100, 300, 500, 1000],
    )
    parser.add_argument(
        "--piv", type=float, nargs="*", default=[0.2, 0.4, 0.5, 0.6, 0.8]
    )
    parser.add_argument("--seeds", type=int, default=10)
    args = parser.parse_args()

    header = ["n"]
    for p in args.piv:
        header += [f"p{p}:avg", "min", "max", "sd"]
    print("\t".join(header))
    for n in args.n:
        row = [str(n)]
        for p in args.piv:
            stats = sample_stats(n, p, list(range(args.seeds)))
            row += [
                f"{float(stats.avg):.2f}",
                f"{float(stats.min):.2f}",
                f"{float(stats.max):.2f}",
                f"{stats.sd:.2f}",
            ]
        print("\t".join(row))


if __name__ == "__main__":
    main()
