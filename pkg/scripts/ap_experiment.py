"""Variance of squarefree counts over residue classes mod a prime q, for a
range of q at fixed x.

    python scripts/ap_experiment.py --x 100000000 --q 1009 10007 100003
"""
import argparse
import math

from sqfree_lab.ap_variance import ap_variance


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--x", type=int, default=10**8)
    p.add_argument("--q", type=int, nargs="+", default=[1009, 10007, 100003])
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    print(f"{'q':>8} {'log q/log x':>11} {'var (expct)':>12} {'var (mean)':>12} {'predicted':>10} {'ratio':>7}")
    for q in args.q:
        r = ap_variance(args.x, q, workers=args.workers)

        print(f"{q:>8} {math.log(q) / math.log(args.x):>11.3f} {r.variance_paper_centered:>12.4f} "
              f"{r.variance_mean_centered:>12.4f} {r.predicted:>10.4f} {r.ratio:>7.4f}")

if __name__ == "__main__":
    main()
