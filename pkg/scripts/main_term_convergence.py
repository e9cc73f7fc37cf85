"""How fast the sinc double sum approaches C sqrt(H) as the divisor cutoff z
grows, for several H.

    python scripts/main_term_convergence.py
"""
import argparse

from sqfree_lab.main_term import sinc_main_term


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--H", type=int, nargs="+", default=[10**2, 10**3, 10**4, 10**5])
    p.add_argument("--exponents", type=float, nargs="+", default=[1.1, 1.2, 1.5, 2.0])
    args = p.parse_args()

    print(f"{'H':>8} " + " ".join(f"{'z=H^' + str(e):>10}" for e in args.exponents))
    for H in args.H:
        ratios = [sinc_main_term(H, float(H) ** e).ratio_to_prediction for e in args.exponents]
        print(f"{H:>8} " + " ".join(f"{r:>10.4f}" for r in ratios))


if __name__ == "__main__":
    main()
