"""Variance-scaling Hurst estimates for squarefrees, primes and an iid
control sequence.

    python scripts/hurst_experiment.py --X 1000000000 --trials 10000 --seed 0
"""
import argparse

from sqfree_lab.stochastic import hurst_estimate, iid_sign_sequence


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--X", type=int, default=10**9)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    Hs = [2**k for k in range(8, 17, 2)]
    runs = {
        "iid +-1": hurst_estimate("squarefree", args.X, Hs, args.trials, seed=args.seed,
                                  sequence=iid_sign_sequence(args.seed)),
        "squarefree": hurst_estimate("squarefree", args.X, Hs, args.trials, seed=args.seed, workers=args.workers),
        "prime": hurst_estimate("prime", args.X, Hs, args.trials, seed=args.seed, workers=args.workers),
    }
    for name, est in runs.items():
        vs = " ".join(f"{v:.4g}" for v in est.variances)
        print(f"{name:>11}: implied Hurst {est.implied_hurst:.4f}  variances [{vs}]")


if __name__ == "__main__":
    main()
