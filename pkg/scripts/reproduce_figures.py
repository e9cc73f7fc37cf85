"""Write the normalized partial-sum paths for squarefrees and primes as CSV,
and plot them if matplotlib is importable.

    python scripts/reproduce_figures.py --x 200000000000 --out figures/
"""
import argparse
import math
from pathlib import Path

from sqfree_lab.stochastic import figure_data


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--x", type=int, default=2 * 10**11)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--out", type=Path, default=Path("figures"))
    args = p.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    H = math.isqrt(args.x)
    files = {}
    for kind in ("squarefree", "prime"):
        f = args.out / f"path_{kind}.csv"
        n = figure_data(kind, args.x, H, args.t_max, args.steps, f)
        files[kind] = f
        print(f"{kind}: {n} rows -> {f}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    for kind, f in files.items():
        rows = [l.split(",") for l in f.read_text().splitlines() if l and not l.startswith("#")][1:]
        t, v = zip(*((float(a), float(b)) for a, b in rows))
        fig, ax = plt.subplots(figsize=(8, 3))
        ax.plot(t, v, lw=0.8)
        ax.grid(True, alpha=0.4)
        ax.set_xlabel("t")
        ax.set_title(f"{kind}, x = {args.x}, H = {H}")
        fig.tight_layout()
        fig.savefig(f.with_suffix(".png"), dpi=120)
        plt.close(fig)


if __name__ == "__main__":
    main()
