"""Variance of squarefree counts in short intervals.

For integer H the count #{x < m <= x + H squarefree} is constant for x in
[n, n+1), so the average of |count - 6H/π²|² over x in [X, 2X] is exactly the
average over the integers n = X, ..., 2X - 1.  We stream squarefree indicators
over (X, 2X + H) once, keep Σ Δ_n and Σ Δ_n² as exact integers, and only turn
them into floats at the very end.

Work is split into fixed chunks of starting points, so the integer sums do not
depend on how many worker processes share the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from numba import njit

from .constants import SIX_OVER_PI2, C_value
from .errors import RangeError
from .sieve import _squarefree_kernel, base_primes, squarefree_indicator

CHUNK = 1 << 24


@dataclass
class VarianceReport:
    X: int
    H: int
    sum_counts: int
    sum_squares: int
    variance: float
    predicted: float
    ratio: float
    in_unconditional_range: bool
    in_lindelof_range: bool
    empirical_mean: float
    variance_mean_centered: float

    def to_dict(self) -> dict:
        return asdict(self)


@njit(cache=True)
def _window_moments(ind, count, Hs):
    k = Hs.shape[0]
    s1 = np.zeros(k, dtype=np.int64)
    s2 = np.zeros(k, dtype=np.int64)
    for t in range(k):
        H = Hs[t]
        d = np.int64(0)
        for i in range(H):
            d += np.int64(ind[i])
        a = np.int64(0)
        b = np.int64(0)
        for j in range(count):
            a += d
            b += d * d
            d += np.int64(ind[j + H]) - np.int64(ind[j])
        s1[t] = a
        s2[t] = b
    return s1, s2


def _chunk_moments(args):
    s, e, Hs, hi_total = args
    Hs = np.asarray(Hs, dtype=np.int64)
    hmax = int(Hs.max())
    # indicator for m in [s + 1, e + hmax]; one spare slot for the last slide
    primes = base_primes(hi_total)
    ind = _squarefree_kernel(s + 1, e - s + hmax, primes)
    s1, s2 = _window_moments(ind, e - s, Hs)
    return [int(v) for v in s1], [int(v) for v in s2]


def _chunks(lo: int, hi: int, size: int = CHUNK):
    s = lo
    while s < hi:
        yield s, min(s + size, hi)
        s += size


def window_moment_sums(X: int, Hs: Sequence[int], workers: int = 1):
    """Exact (Σ Δ_n, Σ Δ_n²) over n in [X, 2X) for each H in ``Hs``."""
    Hs = [int(h) for h in Hs]
    positive = [h for h in Hs if h > 0]
    s1 = {h: 0 for h in Hs}
    s2 = {h: 0 for h in Hs}
    if not positive:
        return [0] * len(Hs), [0] * len(Hs)
    hmax = max(positive)
    hi_total = 2 * X + hmax + 1
    # keep per-chunk Σ Δ² inside int64
    size = max(1, min(CHUNK, (1 << 62) // (hmax * hmax)))
    jobs = [(s, e, positive, hi_total) for s, e in _chunks(X, 2 * X, size)]
    if workers <= 1:
        results = map(_chunk_moments, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_chunk_moments, jobs)
    try:
        for a, b in results:
            for h, va, vb in zip(positive, a, b):
                s1[h] += va
                s2[h] += vb
    finally:
        if workers > 1:
            pool.shutdown()
    return [s1[h] for h in Hs], [s2[h] for h in Hs]


def _in_range(X: int, H: int, num: int, den: int) -> bool:
    # H <= X^(num/den)  <=>  H^den <= X^num
    return H**den <= X**num


def make_report(X: int, H: int, sum_counts: int, sum_squares: int, C: float | None = None) -> VarianceReport:
    center = SIX_OVER_PI2 * H
    # mean-centered part exactly, then shift by (mean - center)²
    spread = float(Fraction(sum_squares * X - sum_counts * sum_counts, X * X))
    mean = sum_counts / X
    variance = spread + (mean - center) ** 2
    C = C_value() if C is None else C
    predicted = C * math.sqrt(H)
    return VarianceReport(
        X=X,
        H=H,
        sum_counts=sum_counts,
        sum_squares=sum_squares,
        variance=variance,
        predicted=predicted,
        ratio=variance / predicted if predicted > 0 else float("nan"),
        in_unconditional_range=_in_range(X, H, 6, 11),
        in_lindelof_range=_in_range(X, H, 2, 3),
        empirical_mean=mean,
        variance_mean_centered=spread,
    )


def _check(X: int, H: int) -> None:
    if X < 2:
        raise RangeError("X must be >= 2")
    if H < 0 or H > X:
        raise RangeError(f"need 0 <= H <= X, got H={H}, X={X}")


def interval_variance(X: int, H: int, workers: int = 1) -> VarianceReport:
    """(1/X) Σ_{n=X}^{2X-1} (Q(n+H) - Q(n) - 6H/π²)², with moment sums."""
    _check(X, H)
    (a,), (b,) = window_moment_sums(X, [H], workers)
    return make_report(X, H, a, b)


def interval_variance_sweep(X: int, Hs: Sequence[int], workers: int = 1) -> list[VarianceReport]:
    """Same as :func:`interval_variance` for several H, sharing one sieve pass."""
    for H in Hs:
        _check(X, H)
    a, b = window_moment_sums(X, Hs, workers)
    C = C_value()
    return [make_report(X, H, sa, sb, C) for H, sa, sb in zip(Hs, a, b)]


def correlation_sum(x: int, h: int) -> int:
    """Σ_{n <= x} μ²(n) μ²(n + h), exact."""
    if x < 1 or h < 1:
        raise RangeError("need x >= 1 and h >= 1")
    total = 0
    for s, e in _chunks(1, x + 1):
        ind = squarefree_indicator(s, e + h)
        n = e - s
        total += int(np.count_nonzero(ind[:n] & ind[h : h + n]))
    return total


def squarefree_in_window(x: int, H: int) -> int:
    """#{x < m <= x + H : m squarefree}."""
    if H <= 0:
        return 0
    return int(squarefree_indicator(x + 1, x + H + 1).sum(dtype=np.int64))


def deviation_profile(X: int, H: int, samples: int) -> list[tuple[int, float]]:
    """(x, (count(x, x+H] - 6H/π²) / H^{1/4}) at ``samples`` evenly spaced x in [X, 2X)."""
    if samples < 1:
        raise RangeError("samples must be >= 1")
    if H < 0:
        raise RangeError("H must be >= 0")
    out = []
    for i in range(samples):
        x = X + (i * X) // samples
        if H == 0:
            out.append((x, 0.0))
            continue
        dev = (squarefree_in_window(x, H) - SIX_OVER_PI2 * H) / H**0.25
        out.append((x, dev))
    return out
