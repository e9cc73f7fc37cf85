"""Property suites behind the ``verify`` subcommand.

Each check returns a :class:`CheckResult`; ``run_all`` runs the fast ones and
is what the CLI prints as a pass/fail table.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from . import diophantine as dio
from .ap_variance import ap_variance, orthogonality_check
from .interval_variance import interval_variance
from .main_term import gcd_coefficients, naive_pair_coefficients, sinc_lambda_sum_periodic, sinc_main_term
from .sieve import mobius_segment, squarefree_count


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _nonsquare_pair(rng: random.Random, top: int) -> tuple[int, int]:
    while True:
        a, b = rng.randint(1, top), rng.randint(1, top)
        if not dio.is_square(a * b):
            return a, b


def cf_bound_fuzz(instances: int = 200, terms: int = 200, top: int = 10**4, seed: int = 1) -> CheckResult:
    """Every partial quotient after a0 of √(b/a) is <= 2√(ab), i.e. q² <= 4ab."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(instances):
        a, b = _nonsquare_pair(rng, top)
        for q in dio.partial_quotients(a, b, terms):
            if q * q > 4 * a * b:
                return CheckResult("cf partial quotients <= 2 sqrt(ab)", False, f"a={a} b={b} q={q}")
            worst = max(worst, q / (2 * math.sqrt(a * b)))
    return CheckResult("cf partial quotients <= 2 sqrt(ab)", True, f"{instances} instances, max q/(2 sqrt(ab)) = {worst:.4f}")


def lattice_fuzz(instances: int = 100, seed: int = 2, max_ratio: float = 20.0) -> tuple[CheckResult, float]:
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(instances):
        a, b = _nonsquare_pair(rng, 1000)
        M = rng.randint(1, 10**4)
        eta = math.exp(rng.uniform(math.log(1e-3), math.log(0.5)))
        r = dio.count_near_multiples(a, b, M, eta) / dio.lattice_bound(a, b, M, eta)
        worst = max(worst, r)
    ok = worst <= max_ratio
    return CheckResult("near-multiple count / bound <= 20", ok, f"max ratio {worst:.4f}"), worst


def form_box_fuzz(instances: int = 100, seed: int = 3, max_ratio: float = 20.0) -> tuple[CheckResult, float]:
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(instances):
        a, b = _nonsquare_pair(rng, 1000)
        M1, M2 = rng.randint(1, 3000), rng.randint(1, 3000)
        T = math.exp(rng.uniform(0.0, math.log(1e5)))
        r = dio.count_form_box(a, b, M1, M2, T) / dio.form_box_bound(a, b, M1, M2, T)
        worst = max(worst, r)
    ok = worst <= max_ratio
    return CheckResult("form-box count / bound <= 20", ok, f"max ratio {worst:.4f}"), worst


def pell_fuzz(instances: int = 60, box: int = 3000, seed: int = 4) -> CheckResult:
    """#T_m^+ constant over complete classes; #T_m^- = #T_m^+."""
    rng = random.Random(seed)
    tested = 0
    for _ in range(instances):
        while True:
            n1, n2 = rng.randint(1, 12), rng.randint(1, 12)
            if not dio.is_square(n1 * n2):
                break
        # seed the right-hand side from a small point so most instances are solvable
        rhs = 0
        while rhs == 0:
            rhs = n1 * rng.randint(-6, 6) ** 2 - n2 * rng.randint(-6, 6) ** 2
        rep = dio.pell_classes(n1, n2, rhs, box)
        for m, (plus, minus) in rep.class_sizes.items():
            if plus != minus:
                return CheckResult("pell class sizes", False, f"{n1},{n2},{rhs}: m={m} {plus}!={minus}")
        if len(rep.complete_classes) >= 2 and rep.class_sizes:
            tested += 1
            sizes = {rep.class_sizes.get(m, (0, 0))[0] for m in rep.complete_classes}
            if len(sizes) != 1:
                return CheckResult("pell class sizes", False, f"{n1},{n2},{rhs}: {rep.class_sizes}")
    return CheckResult("pell class sizes", True, f"{tested} instances with >= 2 complete classes")


def orthogonality_fuzz(vectors: int = 100, qs=(3, 5, 7, 11, 101), seed: int = 5, rtol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(vectors):
        q = qs[i % len(qs)]
        N = int(rng.integers(1, 400))
        b = rng.normal(size=N) + 1j * rng.normal(size=N)
        left, right = orthogonality_check(q, b)
        worst = max(worst, abs(left - right) / max(abs(right), 1e-300))
    return CheckResult("character orthogonality", bool(worst <= rtol), f"max rel diff {worst:.2e}")


def parseval_anchor(gmax: int = 20, atol: float = 1e-8) -> CheckResult:
    """Σ_{λ∈Z} S(λ/g)² = g."""
    worst = 0.0
    for g in range(1, gmax + 1):
        s, _ = sinc_lambda_sum_periodic(1, g, 10**13)
        worst = max(worst, abs(1.0 + 2.0 * s - g))
    return CheckResult("Parseval anchor sum S(l/g)^2 = g", worst <= atol, f"max abs err {worst:.2e}")


def grouped_vs_naive(D: int = 40, rtol: float = 1e-10) -> CheckResult:
    A = gcd_coefficients(D)
    naive = naive_pair_coefficients(D)
    worst = max(abs(A[g] - v) / max(abs(v), 1e-300) for g, v in naive.items() if abs(v) > 1e-300)
    return CheckResult("gcd-grouped coefficients = naive loop", bool(worst <= rtol), f"max rel diff {worst:.2e}")


def small_exactness() -> CheckResult:
    iv = interval_variance(10, 2).variance
    ap = ap_variance(20, 5).variance_paper_centered
    brute_q = sum(1 for n in range(1, 1001) if all(n % (p * p) for p in range(2, 32)))
    ok = abs(iv - 0.160251) < 1e-6 and abs(ap - 0.251091) < 1e-6 and squarefree_count(1000) == brute_q
    seg = mobius_segment(1, 31).mu.tolist()
    ok = ok and seg[29] == -1 and seg[11] == 0
    return CheckResult("small-instance exactness", ok, f"interval {iv:.6f}, ap {ap:.6f}")


def run_all() -> list[CheckResult]:
    return [
        small_exactness(),
        grouped_vs_naive(),
        parseval_anchor(),
        CheckResult("sinc main term H=1 z=4 is 3/16", abs(sinc_main_term(1, 4, 1e-12).value - 0.1875) < 1e-9),
        orthogonality_fuzz(),
        cf_bound_fuzz(),
        lattice_fuzz()[0],
        form_box_fuzz()[0],
        pell_fuzz(),
    ]
