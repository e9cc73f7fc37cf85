"""Normalized partial-sum paths of μ² and of prime weights, and the
variance-scaling (Hurst) fit on window sums.

Squarefree path:  H^{-1/4} Σ_{x < n <= x + tH} (μ²(n) - 6/π²)
Prime path:       H^{-1/2} Σ_{x < n <= x + tH} (1_prime(n) log n - 1)
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .constants import SIX_OVER_PI2
from .errors import PreconditionError, RangeError
from .sieve import MAX_HI, _prime_kernel, _squarefree_kernel, base_primes

KINDS = ("squarefree", "prime")
# A test hook: sequence(lo, hi) -> values w(n) for lo <= n < hi.
Sequence_ = Callable[[int, int], np.ndarray]


@dataclass
class PathSeries:
    x: int
    H: int
    kind: str
    t_grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)


@dataclass
class HurstEstimate:
    H_values: list[int]
    variances: list[float]
    slope: float
    implied_hurst: float
    intercept: float = 0.0
    seed: int | None = None
    trials: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@njit(cache=True)
def _kahan_cumsum(w):
    out = np.empty(w.shape[0] + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i in range(w.shape[0]):
        y = w[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i + 1] = s
    return out


def prime_weights(lo: int, hi: int, primes: np.ndarray | None = None) -> np.ndarray:
    """1_prime(n) log n - 1 for lo <= n < hi."""
    if primes is None:
        primes = base_primes(hi)
    flags = _prime_kernel(lo, hi - lo, primes)
    n = np.arange(lo, hi, dtype=np.float64)
    return np.where(flags, np.log(n), 0.0) - 1.0


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise PreconditionError(f"kind must be one of {KINDS}, got {kind!r}")


def path_sample(kind: str, x: int, H: int, t_max: float, steps: int) -> PathSeries:
    """Normalized partial sums at t_i = i t_max/steps, i = 0..steps."""
    _check_kind(kind)
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    if x < 1 or H < 1 or t_max < 0:
        raise PreconditionError("need x >= 1, H >= 1, t_max >= 0")
    t = np.linspace(0.0, t_max, steps + 1) if t_max > 0 else np.zeros(1)
    span = Fraction(t_max) * H
    n_top = math.floor(span)
    if x + n_top + 1 > MAX_HI:
        raise RangeError("x + t_max H exceeds the sieve range")
    # (x, x + t_i H] holds floor(i t_max H / steps) integers; kept exact
    counts = np.array([math.floor(span * i / steps) for i in range(len(t))], dtype=np.int64)
    if n_top == 0:
        return PathSeries(x, H, kind, t, np.zeros_like(t))
    lo, hi = x + 1, x + n_top + 1
    if kind == "squarefree":
        ind = _squarefree_kernel(lo, hi - lo, base_primes(hi)).astype(np.int64)
        cum = np.concatenate(([0], np.cumsum(ind)))
        values = (cum[counts] - counts * SIX_OVER_PI2) / H**0.25
    else:
        cum = _kahan_cumsum(prime_weights(lo, hi))
        values = cum[counts] / math.sqrt(H)
    return PathSeries(x, H, kind, t, values)


def window_sum(kind: str, x: int, H: int) -> float:
    """Unnormalized Σ_{x < n <= x + H} w(n), computed from scratch."""
    if H <= 0:
        return 0.0
    lo, hi = x + 1, x + H + 1
    if kind == "squarefree":
        return float(_squarefree_kernel(lo, H, base_primes(hi)).sum(dtype=np.int64)) - H * SIX_OVER_PI2
    return math.fsum(prime_weights(lo, hi).tolist())


def iid_sign_sequence(seed: int) -> Sequence_:
    """Independent ±1 values indexed by n (splitmix64 of n and seed), so any
    two windows agree on the values they share."""
    key = np.uint64((seed * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)

    def seq(lo: int, hi: int) -> np.ndarray:
        z = np.arange(lo, hi, dtype=np.uint64) + key
        with np.errstate(over="ignore"):
            z = z + np.uint64(0x9E3779B97F4A7C15)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        return np.where(z & np.uint64(1), 1.0, -1.0)

    return seq


def _window_sums_at(args):
    kind, xs, Hs, hi_total, sequence = args
    hmax = max(Hs)
    Hs = np.asarray(Hs)
    out = np.empty((len(xs), len(Hs)))
    exact = kind == "squarefree" and sequence is None
    primes = base_primes(hi_total) if sequence is None else None
    for i, x in enumerate(xs):
        lo, hi = int(x) + 1, int(x) + hmax + 1
        if sequence is not None:
            cum = np.concatenate(([0.0], np.cumsum(sequence(lo, hi))))
        elif exact:
            ind = _squarefree_kernel(lo, hmax, primes)
            cum = np.concatenate(([0], np.cumsum(ind, dtype=np.int64)))
        else:
            cum = _kahan_cumsum(prime_weights(lo, hi, primes))
        out[i] = cum[Hs]
    return out


def _variance(col: np.ndarray, exact: bool) -> float:
    n = col.shape[0]
    if exact:
        ints = [int(v) for v in col]
        s1, s2 = sum(ints), sum(v * v for v in ints)
        return float(Fraction(s2 * n - s1 * s1, n * n))
    mean = math.fsum(col.tolist()) / n
    return math.fsum(((col - mean) ** 2).tolist()) / n


def hurst_estimate(
    kind: str,
    X: int,
    H_values: Sequence[int],
    trials: int,
    seed: int = 0,
    sequence: Sequence_ | None = None,
    exhaustive: bool = False,
    workers: int = 1,
) -> HurstEstimate:
    """Fit log Var(window sum) ~ slope · log H over H in ``H_values``.

    Window starts are ``trials`` draws from [X, 2X) with a seeded generator,
    or every integer of [X, 2X) when ``exhaustive``.  The variance is taken
    about the empirical mean.  ``sequence`` replaces the arithmetic weights.
    """
    if sequence is None:
        _check_kind(kind)
    Hs = [int(h) for h in H_values]
    if len(Hs) < 2:
        raise PreconditionError("need at least two H values")
    if any(b <= a for a, b in zip(Hs, Hs[1:])) or Hs[0] < 1:
        raise PreconditionError("H values must be positive and strictly increasing")
    if Hs[-1] > X:
        raise PreconditionError("all H must be <= X")
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    if exhaustive:
        xs = np.arange(X, 2 * X, dtype=np.int64)
    else:
        xs = np.sort(np.random.default_rng(seed).integers(X, 2 * X, size=trials))
    hi_total = 2 * X + Hs[-1] + 1
    step = max(1, -(-len(xs) // max(1, 4 * workers)))
    jobs = [(kind, xs[i : i + step], Hs, hi_total, sequence) for i in range(0, len(xs), step)]
    if workers <= 1 or sequence is not None:
        parts = list(map(_window_sums_at, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_window_sums_at, jobs))
    sums = np.concatenate(parts, axis=0)
    exact = kind == "squarefree" and sequence is None
    variances = [_variance(sums[:, j], exact) for j in range(len(Hs))]
    if min(variances) <= 0:
        raise PreconditionError("zero variance at some H; cannot fit a log slope")
    slope, intercept = np.polyfit(np.log(Hs), np.log(variances), 1)
    return HurstEstimate(
        H_values=Hs,
        variances=variances,
        slope=float(slope),
        implied_hurst=float(slope) / 2.0,
        intercept=float(intercept),
        seed=None if exhaustive else seed,
        trials=len(xs),
    )


def figure_data(kind: str, x: int, H: int, t_max: float, steps: int, out) -> int:
    """Write the path as CSV (t, value) with a commented header; returns rows written."""
    path = path_sample(kind, x, H, t_max, steps)
    vals = path.values
    y_lo, y_hi = (math.floor(vals.min()), math.ceil(vals.max())) if len(vals) else (0, 0)
    header = [
        f"# kind={kind} x={x} H={H} t_max={t_max} steps={steps}",
        f"# normalization=H^-{'1/4' if kind == 'squarefree' else '1/2'}",
        f"# lattice x-ticks: t = 0..{math.floor(t_max)}",
        f"# lattice y-ticks: integers {y_lo}..{y_hi}",
    ]
    with open(out, "w") as fh:
        fh.write("\n".join(header) + "\n")
        fh.write("t,value\n")
        for t, v in zip(path.t_grid.tolist(), vals.tolist()):
            fh.write(f"{t!r},{v!r}\n")
    return len(vals)
