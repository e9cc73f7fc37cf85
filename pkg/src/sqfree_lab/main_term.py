"""The analytic main term of the short-interval variance.

    2H² Σ_{d1², d2² <= z} μ(d1)μ(d2)/(d1² d2²) Σ_{λ>=1} |W(Hλ/(d1², d2²))|²

The double sum only sees (d1, d2) through g = gcd(d1, d2)², so we group by the
gcd d0 and precompute A(d0) = Σ_{gcd(d1,d2)=d0} μ(d1)μ(d2)/(d1² d2²) by Möbius
inversion over multiples.  Each d0 then needs a single λ-sum.

For W = S (sinc) and integer H, sin²(πHλ/g) is periodic in λ with period
p = g/gcd(H, g), so the first L = K·p terms collapse to p Hurwitz-zeta
differences.  That makes the truncation point L essentially free; what is
left out past L is bounded by |S(y)| <= 1/(π y) and reported.

Long periods (g much larger than H) would make that O(g) per class.  There
the full sum comes from Poisson summation instead: S² has Fourier transform
the triangle max(0, 1 - |t|), so Σ_{λ∈Z} S(aλ)² = (1/a) Σ_{|k|<a} (1 - |k|/a),
a finite sum in closed form with no truncation at all.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .constants import C_value
from .errors import PreconditionError
from .sieve import mobius_segment


@dataclass
class SincMainTermResult:
    H: float
    z: float
    value: float
    lambda_truncation: int
    truncation_error_bound: float
    ratio_to_prediction: float
    prediction: float

    def to_dict(self) -> dict:
        return asdict(self)


def sinc(x):
    """S(x) = sin(πx)/(πx) with S(0) = 1."""
    return np.sinc(x)


def _mobius_upto(D: int) -> np.ndarray:
    """mu[d] for 0 <= d <= D (mu[0] unused)."""
    out = np.zeros(D + 1, dtype=np.float64)
    if D >= 1:
        out[1:] = mobius_segment(1, D + 1).mu
    return out


def gcd_coefficients(D: int) -> np.ndarray:
    """A[d0] = Σ_{d1,d2 <= D, gcd(d1,d2) = d0} μ(d1)μ(d2)/(d1² d2²), index 0 unused."""
    mu = _mobius_upto(D)
    d = np.arange(D + 1, dtype=np.float64)
    w = np.zeros(D + 1)
    w[1:] = mu[1:] / d[1:] ** 2
    # T[k] = Σ_{k | d <= D} μ(d)/d², so T[k]² sums over pairs with k | gcd
    T = np.zeros(D + 1)
    for k in range(1, D + 1):
        T[k] = w[k::k].sum()
    B = T * T
    A = np.zeros(D + 1)
    for d0 in range(1, D + 1):
        m = np.arange(1, D // d0 + 1)
        A[d0] = np.dot(mu[m], B[d0 * m])
    return A


def naive_pair_coefficients(D: int) -> dict[int, float]:
    """Direct double loop over (d1, d2) grouped by gcd; test oracle for A."""
    mu = _mobius_upto(D)
    out: dict[int, float] = {}
    for d1 in range(1, D + 1):
        if mu[d1] == 0:
            continue
        for d2 in range(1, D + 1):
            if mu[d2] == 0:
                continue
            g = math.gcd(d1, d2)
            out[g] = out.get(g, 0.0) + mu[d1] * mu[d2] / (d1 * d1 * d2 * d2)
    return out


def _is_integer(H: float) -> bool:
    return float(H).is_integer()


def sinc_lambda_sum_periodic(H: int, g: int, min_terms: int) -> tuple[float, int]:
    """Σ_{λ=1}^{L} S(Hλ/g)² for integer H, g, with L the first multiple of the
    period that is >= min_terms.  Returns (sum, L)."""
    p = g // math.gcd(H, g)
    K = max(1, -(-min_terms // p))
    r = np.arange(1, p + 1, dtype=np.int64)
    # reduce Hr mod g in integers so the sine argument stays exact
    num = np.sin(np.pi * ((H * r) % g) / g) ** 2
    x = r / p
    hz = special.zeta(2.0, x) - special.zeta(2.0, x + K)
    a = H / g
    total = float(np.sum(num * hz)) / (math.pi * a * p) ** 2
    return total, K * p


# periods above this go through the closed form
MAX_PERIOD = 1 << 14


def sinc_lambda_sum_closed(a: float) -> float:
    """Σ_{λ>=1} S(aλ)² for a > 0, exactly, from the two-sided Poisson identity."""
    n = math.ceil(a) - 1  # number of k >= 1 with k < a
    two_sided = (1.0 + 2.0 * n - n * (n + 1) / a) / a
    return 0.5 * (two_sided - 1.0)


def sinc_lambda_sum_direct(a: float, L: int, chunk: int = 1 << 20) -> float:
    """Σ_{λ=1}^{L} S(aλ)² by plain summation."""
    total = 0.0
    for s in range(1, L + 1, chunk):
        lam = np.arange(s, min(s + chunk, L + 1), dtype=np.float64)
        total += float(np.sum(np.sinc(a * lam) ** 2))
    return total


def sinc_tail_bound(a: float, L: int) -> float:
    """Σ_{λ > L} S(aλ)² <= Σ_{λ > L} 1/(π a λ)² <= 1/(π² a² L)."""
    return 1.0 / (math.pi**2 * a * a * L)


def sinc_main_term(H: float, z: float, rel_tol: float = 1e-8) -> SincMainTermResult:
    """Grouped evaluation of 2H² Σ μ(d1)μ(d2)/(d1²d2²) Σ_λ S(Hλ/(d1²,d2²))²."""
    if rel_tol <= 0:
        raise PreconditionError("rel_tol must be positive")
    if H < 1 or z < 1:
        raise PreconditionError("need H >= 1 and z >= 1")
    D = math.isqrt(int(math.floor(z)))
    A = gcd_coefficients(D)
    integer_H = _is_integer(H)
    value = 0.0
    bound = 0.0
    L_max = 0
    for d0 in range(1, D + 1):
        if A[d0] == 0.0:
            continue
        g = d0 * d0
        a = H / g
        if integer_H and g // math.gcd(int(H), g) > MAX_PERIOD:
            value += A[d0] * sinc_lambda_sum_closed(a)
            continue
        if integer_H:
            L_min = math.ceil(g / (H * rel_tol)) + math.ceil(g / H)
            lam_sum, L = sinc_lambda_sum_periodic(int(H), g, L_min)
        else:
            L = math.ceil(g / (H * math.sqrt(rel_tol))) + math.ceil(g / H)
            lam_sum = sinc_lambda_sum_direct(a, L)
        value += A[d0] * lam_sum
        bound += abs(A[d0]) * sinc_tail_bound(a, L)
        L_max = max(L_max, L)
    value *= 2.0 * H * H
    bound *= 2.0 * H * H
    prediction = C_value() * math.sqrt(H)
    return SincMainTermResult(
        H=H,
        z=z,
        value=value,
        lambda_truncation=L_max,
        truncation_error_bound=bound,
        ratio_to_prediction=value / prediction,
        prediction=prediction,
    )


def _as_vector_fn(W: Callable) -> Callable[[np.ndarray], np.ndarray]:
    try:
        probe = np.asarray(W(np.array([0.5, 1.5])))
        if probe.shape == (2,):
            return lambda y: np.asarray(W(y))
    except Exception:
        pass
    return np.vectorize(W, otypes=[np.complex128])


_EPS2 = np.finfo(np.float64).eps ** 2


def weighted_lambda_sum(Wv, a: float, rel_tol: float, max_terms: int = 1 << 26) -> float:
    """Σ_{λ>=1} |W(aλ)|², summed in growing chunks until a chunk adds less
    than rel_tol of the running total (and the argument is past 1), or only
    rounding noise."""
    total = 0.0
    start = 1
    chunk = max(1024, int(8 / a) + 1)
    while start <= max_terms:
        lam = np.arange(start, start + chunk, dtype=np.float64)
        part = float(np.sum(np.abs(Wv(a * lam)) ** 2))
        total += part
        start += chunk
        # the eps² floor stops classes whose exact sum is 0 (S at integers)
        if a * start > 1.0 and part <= rel_tol * abs(total) + len(lam) * _EPS2:
            break
        chunk *= 2
    return total


def weighted_main_term(H: float, z: float, W: Callable, rel_tol: float = 1e-10) -> float:
    """The double sum with a general weight W in place of S.

    W must decay like the smooth-weight hypothesis (|W(y)| <~ (1+|y|)^-4 and
    derivatives alike); that is the caller's job and is not checked.
    """
    if rel_tol <= 0:
        raise PreconditionError("rel_tol must be positive")
    Wv = _as_vector_fn(W)
    D = math.isqrt(int(math.floor(z)))
    A = gcd_coefficients(D)
    value = 0.0
    for d0 in range(1, D + 1):
        if A[d0] == 0.0:
            continue
        value += A[d0] * weighted_lambda_sum(Wv, H / (d0 * d0), rel_tol)
    return 2.0 * H * H * value


def weight_integral(W: Callable) -> float:
    """π ∫_0^∞ |W(y)|² √y dy by adaptive quadrature."""
    f = lambda y: abs(W(y)) ** 2 * math.sqrt(y)
    head, _ = integrate.quad(f, 0.0, 1.0, limit=200)
    tail, _ = integrate.quad(f, 1.0, np.inf, limit=500)
    return math.pi * (head + tail)


def weighted_prediction(H: float, W: Callable) -> float:
    """C √H π ∫_0^∞ |W(y)|² √y dy."""
    return C_value() * math.sqrt(H) * weight_integral(W)


# Gauss-Legendre nodes on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def sinc_half_moment_partial(Y: int) -> float:
    """∫_0^Y S(y)² √y dy for integer Y >= 1, one Gauss-Legendre panel per
    interval between consecutive zeros of S."""
    Y = int(Y)
    if Y < 1:
        raise PreconditionError("Y must be a positive integer")
    # first panel: y = u², removes the √y kink at the origin
    u = _GL_X
    first = float(np.sum(_GL_W * np.sinc(u * u) ** 2 * u * 2.0 * u))
    if Y == 1:
        return first
    k = np.arange(1, Y, dtype=np.float64)[:, None]
    y = k + _GL_X[None, :]
    panels = (np.sinc(y) ** 2 * np.sqrt(y)) @ _GL_W
    return first + math.fsum(panels.tolist())


def sinc_half_moment_tail_bound(Y: float) -> float:
    """∫_Y^∞ S(y)² √y dy <= (1/π²) ∫_Y^∞ y^{-3/2} dy = 2/(π² √Y)."""
    return 2.0 / (math.pi**2 * math.sqrt(Y))


def sinc_half_moment(Y: int = 20000) -> float:
    """∫_0^∞ S(y)² √y dy: panels up to Y plus the mean-value tail
    (1/(2π²)) ∫_Y^∞ y^{-3/2} dy = 1/(π² √Y); at integer Y the oscillating
    remainder of the tail is O(Y^{-5/2})."""
    return sinc_half_moment_partial(Y) + 1.0 / (math.pi**2 * math.sqrt(Y))
