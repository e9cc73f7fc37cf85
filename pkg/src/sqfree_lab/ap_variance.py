"""Variance of squarefree counts over reduced residue classes to a prime modulus,
and the character-orthogonality identity linking it to character sums.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .constants import C_value, ap_mean, ap_variance_factor, is_prime, prime_divisors
from .errors import PreconditionError
from .sieve import _squarefree_kernel, base_primes

CHUNK = 1 << 24
MAX_CHARACTER_Q = 5000


@dataclass
class APVarianceReport:
    x: int
    q: int
    class_counts: np.ndarray = field(repr=False)  # index a - 1 for a = 1..q-1
    variance_paper_centered: float
    variance_mean_centered: float
    predicted: float
    ratio: float
    paper_mean: float
    empirical_mean: float
    sum_counts: int
    sum_squares: int

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "class_counts"}
        return d


@njit(cache=True)
def _class_counts_kernel(ind, s, q):
    counts = np.zeros(q, dtype=np.int64)
    r = s % q
    for j in range(ind.shape[0]):
        if ind[j]:
            counts[r] += 1
        r += 1
        if r == q:
            r = 0
    return counts


def _chunk_counts(args):
    s, e, q, x = args
    ind = _squarefree_kernel(s, e - s, base_primes(x + 1))
    return _class_counts_kernel(ind, s, q)


def residue_counts(x: int, q: int, workers: int = 1) -> np.ndarray:
    """counts[r] = #{m <= x squarefree, m ≡ r (mod q)} for r = 0..q-1."""
    jobs = []
    s = 1
    while s <= x:
        e = min(s + CHUNK, x + 1)
        jobs.append((s, e, q, x))
        s = e
    total = np.zeros(q, dtype=np.int64)
    if workers <= 1:
        for c in map(_chunk_counts, jobs):
            total += c
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for c in pool.map(_chunk_counts, jobs):
                total += c
    return total


def ap_variance(x: int, q: int, workers: int = 1) -> APVarianceReport:
    """(1/φ(q)) Σ_{(a,q)=1} (#{m <= x sqfree, m ≡ a} - expected)², q prime."""
    if not is_prime(q):
        raise PreconditionError(f"q={q} must be prime")
    if not 2 <= q <= x:
        raise PreconditionError("need 2 <= q <= x")
    counts = residue_counts(x, q, workers)[1:]  # reduced classes a = 1..q-1
    phi = q - 1
    s1 = int(counts.sum())
    s2 = int((counts * counts).sum())
    paper_mean = ap_mean(x, q)
    emp = s1 / phi
    spread = float(Fraction(s2 * phi - s1 * s1, phi * phi))
    var_paper = spread + (emp - paper_mean) ** 2
    predicted = C_value() * ap_variance_factor(q) * math.sqrt(x / q)
    return APVarianceReport(
        x=x,
        q=q,
        class_counts=counts,
        variance_paper_centered=var_paper,
        variance_mean_centered=spread,
        predicted=predicted,
        ratio=var_paper / predicted,
        paper_mean=paper_mean,
        empirical_mean=emp,
        sum_counts=s1,
        sum_squares=s2,
    )


def primitive_root(q: int) -> int:
    if not is_prime(q):
        raise PreconditionError(f"q={q} must be prime")
    if q == 2:
        return 1
    factors = prime_divisors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in factors):
            return g
    raise PreconditionError(f"no primitive root mod {q}")


def character_table(q: int) -> np.ndarray:
    """chi[j, n] = χ_j(n) for n = 0..q-1, χ_j(g^k) = e(jk/(q-1)); row 0 is principal."""
    g = primitive_root(q)
    phi = q - 1
    dlog = np.zeros(q, dtype=np.int64)
    v = 1
    for k in range(phi):
        dlog[v] = k
        v = v * g % q
    j = np.arange(phi)[:, None]
    chi = np.exp(2j * np.pi * (j * dlog[None, :] % phi) / phi)
    chi[:, 0] = 0.0
    return chi


def orthogonality_check(q: int, coefficients) -> tuple[float, float]:
    """Both sides of the nonprincipal-character orthogonality identity.

    Left:  (1/φ(q)) Σ_{χ ≠ χ0} |Σ_n b_n χ(n)|²
    Right: Σ_{(a,q)=1} |Σ_{n ≡ a} b_n - (1/φ(q)) Σ_{(n,q)=1} b_n|²
    with b_n = coefficients[n - 1].
    """
    if q > MAX_CHARACTER_Q:
        raise PreconditionError(f"character check limited to q <= {MAX_CHARACTER_Q}")
    b = np.asarray(coefficients, dtype=np.complex128)
    chi = character_table(q)
    phi = q - 1
    n = np.arange(1, b.shape[0] + 1) % q
    # left side straight from Σ_n b_n χ(n), in slices to bound memory
    char_sums = np.zeros(phi - 1, dtype=np.complex128)
    step = max(1, 4_000_000 // phi)
    for i in range(0, b.shape[0], step):
        char_sums += chi[1:, n[i : i + step]] @ b[i : i + step]
    class_sums = np.zeros(q, dtype=np.complex128)
    np.add.at(class_sums, n, b)
    left = float(np.sum(np.abs(char_sums) ** 2) / phi)
    reduced = class_sums[1:]
    mean = reduced.sum() / phi
    right = float(np.sum(np.abs(reduced - mean) ** 2))
    return left, right
