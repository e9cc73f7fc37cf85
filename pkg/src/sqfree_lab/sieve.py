"""Segmented sieves for the Möbius function, squarefree indicators and primes.

Every routine works block by block with base primes up to sqrt(hi), so memory
stays at O(block) no matter how far out the segment lives.  Results never
depend on the block size; the tests glue segments with different block sizes
and compare.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterator

import numpy as np
from numba import njit

from .errors import RangeError

DEFAULT_BLOCK = 1 << 20
MAX_HI = (1 << 63) - 1  # numba works in signed 64-bit


@dataclass(frozen=True)
class MobiusSegment:
    lo: int
    hi: int
    mu: np.ndarray  # int8, mu[n - lo] = μ(n)

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(n)
        return int(self.mu[n - self.lo])

    def squarefree(self) -> np.ndarray:
        return (self.mu != 0).astype(np.uint8)


@dataclass(frozen=True)
class PrimeSegment:
    lo: int
    hi: int
    flags: np.ndarray  # bool

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.flags).astype(np.int64) + self.lo


@lru_cache(maxsize=8)
def primes_upto(n: int) -> np.ndarray:
    """All primes p <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    out = np.flatnonzero(is_p).astype(np.int64)
    out.flags.writeable = False
    return out


def base_primes(hi: int) -> np.ndarray:
    """Primes up to sqrt(hi - 1): enough to sieve anything below ``hi``."""
    return primes_upto(isqrt(max(hi - 1, 0)))


@njit(cache=True)
def _mobius_kernel(lo, n, primes):
    mu = np.ones(n, dtype=np.int8)
    rem = np.arange(lo, lo + n, dtype=np.int64)
    top = lo + n - 1
    for p in primes:
        if p * p > top:
            break
        j = (-lo) % p
        while j < n:
            r = rem[j] // p
            rem[j] = r
            if r % p == 0:
                mu[j] = 0
            else:
                mu[j] = -mu[j]
            j += p
    for j in range(n):
        if mu[j] != 0 and rem[j] > 1:
            mu[j] = -mu[j]
    return mu


@njit(cache=True)
def _squarefree_kernel(lo, n, primes):
    ind = np.ones(n, dtype=np.uint8)
    top = lo + n - 1
    for p in primes:
        q = p * p
        if q > top:
            break
        j = (-lo) % q
        while j < n:
            ind[j] = 0
            j += q
    return ind


@njit(cache=True)
def _prime_kernel(lo, n, primes):
    flags = np.ones(n, dtype=np.bool_)
    for j in range(n):
        if lo + j < 2:
            flags[j] = False
    top = lo + n - 1
    for p in primes:
        if p * p > top:
            break
        first = ((lo + p - 1) // p) * p
        if first < p * p:
            first = p * p
        j = first - lo
        while j < n:
            flags[j] = False
            j += p
    return flags


def _check_bounds(lo: int, hi: int, min_lo: int) -> None:
    if not (min_lo <= lo < hi) or hi > MAX_HI:
        raise RangeError(f"need {min_lo} <= lo < hi <= 2^63-1, got lo={lo}, hi={hi}")


def _blocks(lo: int, hi: int, block: int) -> Iterator[tuple[int, int]]:
    if block < 1:
        raise RangeError("block size must be positive")
    s = lo
    while s < hi:
        e = min(s + block, hi)
        yield s, e
        s = e


def mobius_segment(lo: int, hi: int, block: int = DEFAULT_BLOCK) -> MobiusSegment:
    """μ(n) for lo <= n < hi."""
    _check_bounds(lo, hi, 1)
    primes = base_primes(hi)
    parts = [_mobius_kernel(s, e - s, primes) for s, e in _blocks(lo, hi, block)]
    return MobiusSegment(lo, hi, np.concatenate(parts))


def squarefree_indicator(lo: int, hi: int, block: int = DEFAULT_BLOCK) -> np.ndarray:
    """uint8 array with 1 at squarefree n, for lo <= n < hi."""
    _check_bounds(lo, hi, 1)
    primes = base_primes(hi)
    parts = [_squarefree_kernel(s, e - s, primes) for s, e in _blocks(lo, hi, block)]
    return np.concatenate(parts)


def prime_segment(lo: int, hi: int, block: int = DEFAULT_BLOCK) -> PrimeSegment:
    _check_bounds(lo, hi, 2)
    primes = base_primes(hi)
    parts = [_prime_kernel(s, e - s, primes) for s, e in _blocks(lo, hi, block)]
    return PrimeSegment(lo, hi, np.concatenate(parts))


def squarefree_count(x: int) -> int:
    """Q(x) = #{n <= x squarefree}, via sum_{d <= sqrt x} μ(d) floor(x/d^2)."""
    if x < 0:
        raise RangeError("x must be >= 0")
    if x > MAX_HI:
        raise RangeError("x exceeds 2^63-1")
    r = isqrt(x)
    if r == 0:
        return 0
    mu = mobius_segment(1, r + 1).mu.astype(np.int64)
    d = np.arange(1, r + 1, dtype=np.int64)
    terms = mu * (np.int64(x) // (d * d))
    # partial sums stay below 2x, fine in int64 for x < 2^62
    return int(terms.sum()) if x < (1 << 62) else sum(int(t) for t in terms)


def write_segment_csv(seg: MobiusSegment, fh) -> None:
    fh.write("n,mu\n")
    for i, v in enumerate(seg.mu.tolist()):
        fh.write(f"{seg.lo + i},{v}\n")
