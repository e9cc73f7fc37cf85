"""Analytic constants: ζ on the real line, 6/π², the variance constant C and
the arithmetic-progression correction factors.

C = ζ(3/2)/π · ∏_p (1 - 3/p² + 2/p³).  The product is truncated at a prime
bound P and the omitted tail is bracketed rigorously: every factor is < 1, and
-log(1 - u) <= u/(1 - u) with u <= 3/p², so the tail lies in [exp(-τ), 1] with
τ = (3/(P-1)) / (1 - 3/(P+1)²).  The reported value is the midpoint of the
resulting interval and ``tail_bound`` its half-width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, PreconditionError
from .sieve import primes_upto

SIX_OVER_PI2 = 6.0 / math.pi**2
DEFAULT_TRUNCATION = 10**7

# Bernoulli numbers B2, B4, B6, B8 for the Euler-Maclaurin tail.
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30)
_ZETA_CUTOFF = 64


@dataclass(frozen=True)
class EulerConstant:
    value: float
    truncation_prime: int
    tail_bound: float
    product: float  # ∏_{p <= P} (1 - 3/p² + 2/p³), untruncated part only


def zeta_real(s: float) -> float:
    """Riemann zeta at real s > 1, absolute error well below 1e-12.

    Direct sum up to N = 64, then Euler-Maclaurin with the integral term, the
    half-endpoint term and four Bernoulli corrections.  The first omitted
    correction is of size ~ s^9 N^(-s-9)/10^6, under 1e-20 for s <= 10.
    """
    s = float(s)
    if not s > 1.0:
        raise DomainError(f"zeta_real needs s > 1, got {s}")
    N = _ZETA_CUTOFF
    head = math.fsum(n ** (-s) for n in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    # rising factorial s(s+1)...(s+2k-2) / (2k)! times B_{2k} N^{-s-2k+1}
    rising = s
    fact = 2.0
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b / fact * rising * N ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return head + tail


@lru_cache(maxsize=None)
def _zeta_3_2() -> float:
    return zeta_real(1.5)


def euler_tail_exponent(P: int) -> float:
    """τ(P) with ∑_{p > P} -log(1 - 3/p² + 2/p³) <= τ(P)."""
    return (3.0 / (P - 1)) / (1.0 - 3.0 / (P + 1) ** 2)


@lru_cache(maxsize=16)
def constant_C(truncation_prime: int = DEFAULT_TRUNCATION) -> EulerConstant:
    """C = ζ(3/2)/π ∏_p (1 - 3/p² + 2/p³), product over p <= truncation_prime."""
    P = int(truncation_prime)
    if P < 2:
        raise PreconditionError("truncation_prime must be >= 2")
    p = primes_upto(P).astype(np.float64)
    P_eff = int(p[-1])
    # 1 - 3/p² + 2/p³ = (1 - 1/p)² (1 + 2/p); the factored form keeps log1p accurate
    logs = 2.0 * np.log1p(-1.0 / p) + np.log1p(2.0 / p)
    product = math.exp(math.fsum(logs.tolist()))
    upper = _zeta_3_2() / math.pi * product
    tau = euler_tail_exponent(P_eff)
    lower = upper * math.exp(-tau)
    return EulerConstant(
        value=0.5 * (upper + lower),
        truncation_prime=P_eff,
        tail_bound=0.5 * (upper - lower),
        product=product,
    )


def C_value() -> float:
    return constant_C(DEFAULT_TRUNCATION).value


def prime_divisors(q: int) -> list[int]:
    """Distinct prime divisors by trial division (q up to ~1e12 is instant)."""
    q = int(q)
    if q < 1:
        raise PreconditionError("q must be positive")
    out = []
    if q % 2 == 0:
        out.append(2)
        while q % 2 == 0:
            q //= 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            out.append(f)
            while q % f == 0:
                q //= f
        f += 2
    if q > 1:
        out.append(q)
    return out


def is_prime(q: int) -> bool:
    return q >= 2 and prime_divisors(q) == [q]


def ap_variance_factor(q: int) -> float:
    """∏_{p | q} (1 + 2/p)^{-1}."""
    if q < 2:
        raise PreconditionError("q must be >= 2")
    out = 1.0
    for p in prime_divisors(q):
        out *= p / (p + 2.0)
    return out


def ap_mean(x: int, q: int) -> float:
    """Expected squarefree count in a reduced class mod q up to x:
    (6/π²)(x/q) ∏_{p | q} (1 - 1/p²)^{-1}."""
    if q < 2 or x < 1:
        raise PreconditionError("need q >= 2 and x >= 1")
    corr = 1.0
    for p in prime_divisors(q):
        corr *= p * p / (p * p - 1.0)
    return SIX_OVER_PI2 * (x / q) * corr


def constants_summary(truncation_prime: int = DEFAULT_TRUNCATION) -> dict:
    c = constant_C(truncation_prime)
    return {
        "C": c.value,
        "tail_bound": c.tail_bound,
        "truncation_prime": c.truncation_prime,
        "six_over_pi2": SIX_OVER_PI2,
        "zeta_3_2": _zeta_3_2(),
    }
