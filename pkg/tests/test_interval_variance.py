import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import Q_brute, interval_variance_brute, is_squarefree
from sqfree_lab.constants import SIX_OVER_PI2
from sqfree_lab.errors import RangeError
from sqfree_lab.interval_variance import (
    correlation_sum,
    deviation_profile,
    interval_variance,
    interval_variance_sweep,
    squarefree_in_window,
    window_moment_sums,
)


def test_small_example_against_oracle():
    r = interval_variance(10, 2)
    assert abs(r.variance - 0.160251) < 1e-6
    assert r.variance == pytest.approx(float(interval_variance_brute(10, 2)), rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(X=st.integers(2, 300), data=st.data())
def test_matches_oracle(X, data):
    H = data.draw(st.integers(0, X))
    assert interval_variance(X, H).variance == pytest.approx(float(interval_variance_brute(X, H)), rel=1e-10, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(X=st.integers(2, 2000), data=st.data())
def test_variance_identity(X, data):
    H = data.draw(st.integers(1, X))
    r = interval_variance(X, H)
    mean = Fraction(r.sum_counts, X)
    c = SIX_OVER_PI2 * H
    # Var = E[Δ²] - 2c E[Δ] + c²
    lhs = float(Fraction(r.sum_squares, X)) - 2 * c * float(mean) + c * c
    assert r.variance == pytest.approx(lhs, rel=1e-9, abs=1e-9)
    assert r.variance == pytest.approx(r.variance_mean_centered + (r.empirical_mean - c) ** 2, rel=1e-12)


def test_zero_width_window():
    r = interval_variance(50, 0)
    assert r.variance == 0.0 and r.sum_counts == 0


def test_sweep_matches_single():
    Hs = [1, 4, 16, 64]
    for r in interval_variance_sweep(5000, Hs):
        single = interval_variance(5000, r.H)
        assert (r.sum_counts, r.sum_squares) == (single.sum_counts, single.sum_squares)


def test_worker_independence():
    a = window_moment_sums(3 * 10**6, [16, 256], workers=1)
    b = window_moment_sums(3 * 10**6, [16, 256], workers=3)
    assert a == b


def test_range_flags():
    r = interval_variance(10**6, 1000)
    assert r.in_unconditional_range == (1000**11 <= 10**36)
    assert r.in_lindelof_range


@pytest.mark.parametrize("X,H", [(1, 0), (10, 11), (10, -1)])
def test_bad_input(X, H):
    with pytest.raises(RangeError):
        interval_variance(X, H)


def test_correlation_examples():
    assert correlation_sum(10, 1) == 5
    # n = 1, 3, 5
    assert correlation_sum(10, 2) == 3


@settings(max_examples=20, deadline=None)
@given(x=st.integers(1, 400), h=st.integers(1, 50))
def test_correlation_oracle(x, h):
    want = sum(1 for n in range(1, x + 1) if is_squarefree(n) and is_squarefree(n + h))
    assert correlation_sum(x, h) == want


def test_deviation_profile_example():
    pts = deviation_profile(10, 2, 5)
    assert [x for x, _ in pts] == [10, 12, 14, 16, 18]
    assert pts[1][1] == pytest.approx((2 - 2 * SIX_OVER_PI2) / 2**0.25, abs=1e-5)
    assert squarefree_in_window(12, 2) == Q_brute(14) - Q_brute(12)


def test_large_ratio_near_one():
    r = interval_variance(10**7, 1024)
    assert 0.8 < r.ratio < 1.2
    assert r.predicted == pytest.approx(r.variance / r.ratio)
    assert math.isfinite(r.variance)
