"""Short-interval variance against C sqrt(H) over a geometric sweep of H.

    python scripts/variance_sweep.py --X 1000000000 --workers 8
"""
import argparse
import time

import numpy as np

from sqfree_lab.interval_variance import interval_variance_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--X", type=int, default=10**9)
    p.add_argument("--H-min-exp", type=int, default=8)
    p.add_argument("--H-max-exp", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    Hs = [2**k for k in range(args.H_min_exp, args.H_max_exp + 1)]
    t = time.perf_counter()
    reps = interval_variance_sweep(args.X, Hs, workers=args.workers)
    print(f"X = {args.X}  ({time.perf_counter() - t:.1f}s)")
    print(f"{'H':>8} {'variance':>12} {'C sqrt(H)':>12} {'ratio':>8} {'H<=X^(6/11)':>12}")
    for r in reps:
        print(f"{r.H:>8} {r.variance:>12.5f} {r.predicted:>12.5f} {r.ratio:>8.4f} {str(r.in_unconditional_range):>12}")
    slope = np.polyfit(np.log(Hs), np.log([r.variance for r in reps]), 1)[0]
    print(f"log-log slope: {slope:.4f}  (expected 1/2)")


if __name__ == "__main__":
    main()
