"""Exact-integer tools for the lattice point counts used in the off-diagonal
analysis: continued fractions of √(b/a), good rational approximations, counts
of m with ‖m√(b/a)‖ <= η, counts of |a m1² - b m2²| <= bM2²/T, and the
unit-orbit classes of solutions of n1 x² - n2 y² = N.

No floating point ever decides membership.  Where floats are used at all they
only prefilter, and anything within a safety margin is re-decided in integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import DomainError, PreconditionError


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class QuadraticIrrational:
    """√(b/a) with its continued fraction [a0; preperiod, (period)]."""

    a: int
    b: int
    cf_a0: int
    cf_period: tuple[int, ...]
    cf_preperiod: tuple[int, ...] = ()

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise DomainError("a and b must be positive")
        if is_square(self.a * self.b):
            raise DomainError(f"sqrt({self.b}/{self.a}) is rational")

    def terms(self, n: int) -> list[int]:
        """First n partial quotients a0, a1, ..."""
        out = [self.cf_a0, *self.cf_preperiod]
        i = 0
        while len(out) < n:
            out.append(self.cf_period[i % len(self.cf_period)])
            i += 1
        return out[:n]


def _cf_states(a: int, b: int):
    """Yield (partial quotient, (P, Q)) for √(b/a) = (0 + √(ab))/a.

    Complete quotient x_k = (P + √D)/Q with D = ab and Q | D - P², so every
    step stays in integers.
    """
    D = a * b
    r = isqrt(D)
    P, Q = 0, a
    while True:
        q = (P + r) // Q
        yield q, (P, Q)
        P = q * Q - P
        Q = (D - P * P) // Q


def cf_expand(a: int, b: int, max_terms: int = 10_000) -> QuadraticIrrational:
    """Periodic continued fraction of √(b/a), period found by state repetition."""
    if a < 1 or b < 1:
        raise DomainError("a and b must be positive")
    if is_square(a * b):
        raise DomainError(f"sqrt({b}/{a}) is rational")
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    for i, (q, state) in enumerate(_cf_states(a, b)):
        if state in seen:
            start = seen[state]
            return QuadraticIrrational(
                a, b, quotients[0], tuple(quotients[start:]), tuple(quotients[1:start])
            )
        if i >= max_terms:
            raise DomainError(f"period longer than {max_terms} terms")
        seen[state] = i
        quotients.append(q)
    raise AssertionError("unreachable")


def partial_quotients(a: int, b: int, n: int) -> list[int]:
    """First n partial quotients of √(b/a), straight from the recurrence."""
    if is_square(a * b):
        raise DomainError(f"sqrt({b}/{a}) is rational")
    out = []
    for q, _ in _cf_states(a, b):
        out.append(q)
        if len(out) == n:
            return out
    return out


def approximation_holds(a: int, b: int, r: int, q: int) -> bool:
    """|√(b/a) - r/q| <= 1/q², decided in integers.

    √(b/a) lies in [(rq-1)/q², (rq+1)/q²] iff b q⁴ <= a (rq+1)² and, when
    rq - 1 > 0, b q⁴ >= a (rq-1)².
    """
    q4 = q**4
    if b * q4 > a * (r * q + 1) ** 2:
        return False
    lo = r * q - 1
    return lo <= 0 or b * q4 >= a * lo * lo


def convergents(a: int, b: int):
    """Yield (r, q) convergents of √(b/a)."""
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    for t, _ in _cf_states(a, b):
        h0, h1 = t * h0 + h1, h0
        k0, k1 = t * k0 + k1, k0
        yield h0, k0


def convergent_in_range(a: int, b: int, R: int) -> tuple[int, int]:
    """First convergent r/q of √(b/a) with R <= q <= 3√(ab) R."""
    if is_square(a * b):
        raise DomainError(f"sqrt({b}/{a}) is rational")
    if R < 1:
        raise PreconditionError("R must be >= 1")
    for r, q in convergents(a, b):
        if q < R:
            continue
        # q <= 3 √(ab) R  <=>  q² <= 9 ab R²
        if q * q > 9 * a * b * R * R:
            raise AssertionError("partial-quotient bound violated")  # cannot happen
        if not approximation_holds(a, b, r, q):
            raise AssertionError(f"convergent {r}/{q} fails the 1/q² test")
        return r, q
    raise AssertionError("unreachable")


def _near_exact(a: int, b: int, m: int, u: int, v: int) -> bool:
    """‖m√(b/a)‖ <= u/v in integers."""
    t = m * m * b
    f = isqrt(t // a)  # floor(m √(b/a))
    # distance to f:  m√(b/a) <= f + u/v
    if t * v * v <= a * (f * v + u) ** 2:
        return True
    # distance to f + 1:  m√(b/a) >= f + 1 - u/v
    w = (f + 1) * v - u
    return w <= 0 or t * v * v >= a * w * w


def count_near_multiples(a: int, b: int, M: int, eta: float) -> int:
    """#{M <= m < 2M : ‖m√(b/a)‖ <= η}."""
    if is_square(a * b):
        raise DomainError(f"sqrt({b}/{a}) is rational")
    if not 0 < eta <= 1:
        raise PreconditionError("eta must lie in (0, 1]")
    if M < 1:
        raise PreconditionError("M must be >= 1")
    fr = Fraction(eta)
    u, v = fr.numerator, fr.denominator
    m = np.arange(M, 2 * M, dtype=np.float64)
    alpha = m * math.sqrt(b / a)
    dist = np.abs(alpha - np.rint(alpha))
    margin = 1e-12 * (2 * M * math.sqrt(b / a) + 1) + 1e-12
    sure_in = dist < eta - margin
    sure_out = dist > eta + margin
    count = int(np.count_nonzero(sure_in))
    for mm in np.flatnonzero(~sure_in & ~sure_out):
        if _near_exact(a, b, M + int(mm), u, v):
            count += 1
    return count


def lattice_bound(a: int, b: int, M: int, eta: float) -> float:
    """ηM + √(ηM)(ab)^{1/4} + 1."""
    return eta * M + math.sqrt(eta * M) * (a * b) ** 0.25 + 1.0


def _ceil_isqrt(c: int) -> int:
    """Smallest m >= 0 with m² >= c, for integer c."""
    if c <= 0:
        return 0
    return isqrt(c - 1) + 1


def count_form_box(a: int, b: int, M1: int, M2: int, T: float) -> int:
    """#{(m1, m2) : m1 ~ M1, m2 ~ M2, |a m1² - b m2²| <= b M2²/T}.

    With T = Tn/Td exactly, the condition on m2 for fixed m1 is
    (a m1² Tn - U) <= b Tn m2² <= (a m1² Tn + U), U = b M2² Td, an interval
    in m2 found with integer square roots.
    """
    if is_square(a * b):
        raise DomainError(f"sqrt({b}/{a}) is rational")
    if M1 < 1 or M2 < 1 or T < 1:
        raise PreconditionError("need M1, M2, T >= 1")
    fr = Fraction(T)
    Tn, Td = fr.numerator, fr.denominator
    U = b * M2 * M2 * Td
    den = b * Tn
    total = 0
    for m1 in range(M1, 2 * M1):
        c = a * m1 * m1 * Tn
        lo = max(M2, _ceil_isqrt(-((U - c) // den)))
        hi = min(2 * M2 - 1, isqrt((c + U) // den))
        if hi >= lo:
            total += hi - lo + 1
    return total


def form_box_bound(a: int, b: int, M1: int, M2: int, T: float) -> float:
    """M1 M2/T + (√(M1 M2)(ab)^{1/4}/√T + 1) 1{M2 < T}."""
    out = M1 * M2 / T
    if M2 < T:
        out += math.sqrt(M1 * M2) * (a * b) ** 0.25 / math.sqrt(T) + 1.0
    return out


def pell_fundamental(D: int) -> tuple[int, int]:
    """Least positive (x0, y0) with x0² - 4D y0² = 4.

    x0 is forced even, so this is (2X, Y) for the fundamental solution of
    X² - D Y² = 1, read off the convergents of √D.
    """
    if D < 2 or is_square(D):
        raise DomainError(f"D={D} must be a nonsquare >= 2")
    for X, Y in convergents(1, D):
        if X * X - D * Y * Y == 1:
            return 2 * X, Y
    raise AssertionError("unreachable")


@dataclass
class PellClassReport:
    n1: int
    n2: int
    rhs: int
    box: int
    fundamental: tuple[int, int]
    class_sizes: dict[int, tuple[int, int]]  # m -> (#T_m^+, #T_m^-)
    complete_classes: list[int]
    solutions: list[tuple[int, int, int, int]] = field(repr=False)  # (x, y, m, sign)

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "rhs": self.rhs,
            "box": self.box,
            "fundamental": list(self.fundamental),
            "class_sizes": {str(m): list(v) for m, v in sorted(self.class_sizes.items())},
            "complete_classes": self.complete_classes,
            "num_solutions": len(self.solutions),
        }


def _sign_plus(n1: int, n2: int, x: int, y: int) -> bool:
    """√n1 x > √n2 y, via the increasing map t -> sign(t) t²."""
    lhs = n1 * x * x * (1 if x > 0 else -1 if x < 0 else 0)
    rhs = n2 * y * y * (1 if y > 0 else -1 if y < 0 else 0)
    return lhs > rhs


def class_index(n1: int, n2: int, x0: int, y0: int, x: int, y: int) -> int:
    """m with ε^{2m-2} <= |(√n1 x + √n2 y)/(√n1 x - √n2 y)| < ε^{2m}.

    Multiplying by the unit ε = x0/2 + y0√(n1 n2) sends (x, y) to
    (h x + n2 y0 y, h y + n1 y0 x), h = x0/2, and scales the ratio by ε².
    The ratio is >= 1 exactly when x y >= 0.
    """
    h = x0 // 2
    m = 1
    if x * y < 0:
        while x * y < 0:
            x, y = h * x + n2 * y0 * y, h * y + n1 * y0 * x
            m -= 1
        return m
    while True:
        xd, yd = h * x - n2 * y0 * y, h * y - n1 * y0 * x
        if xd * yd < 0:
            return m
        x, y = xd, yd
        m += 1


def pell_classes(n1: int, n2: int, rhs: int, box: int) -> PellClassReport:
    """All solutions of n1 x² - n2 y² = rhs with |x|, |y| <= box, sorted into
    the classes T_m^± by ε-power window and sign of √n1 x - √n2 y."""
    if n1 < 1 or n2 < 1 or is_square(n1 * n2):
        raise DomainError("n1 n2 must be a positive nonsquare")
    if rhs == 0:
        raise PreconditionError("rhs must be nonzero")
    if box < 1:
        raise PreconditionError("box must be >= 1")
    x0, y0 = pell_fundamental(n1 * n2)
    sols = []
    sizes: dict[int, list[int]] = {}
    for x in range(-box, box + 1):
        t = n1 * x * x - rhs
        if t < 0 or t % n2:
            continue
        yy = t // n2
        y = isqrt(yy)
        if y * y != yy or y > box:
            continue
        for yv in {y, -y}:
            m = class_index(n1, n2, x0, y0, x, yv)
            plus = _sign_plus(n1, n2, x, yv)
            sols.append((x, yv, m, 1 if plus else -1))
            sizes.setdefault(m, [0, 0])[0 if plus else 1] += 1
    eps = x0 / 2 + y0 * math.sqrt(n1 * n2)
    scale = math.sqrt(abs(rhs)) / (2 * math.sqrt(min(n1, n2)))
    complete = []
    if sizes:
        lo, hi = min(sizes), max(sizes)
        for m in range(lo - 1, hi + 2):
            # every member of class m has |x|, |y| < √|N| (ε^m + ε^{1-m}) / (2 √min(n1, n2))
            reach = scale * (eps**m + eps ** (1 - m)) * (1 + 1e-12)
            if reach <= box:
                complete.append(m)
    return PellClassReport(
        n1=n1,
        n2=n2,
        rhs=rhs,
        box=box,
        fundamental=(x0, y0),
        class_sizes={m: (v[0], v[1]) for m, v in sorted(sizes.items())},
        complete_classes=complete,
        solutions=sols,
    )
