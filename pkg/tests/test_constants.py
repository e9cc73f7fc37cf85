import math

import pytest
from hypothesis import given, strategies as st

from oracles import C_oracle
from sqfree_lab.constants import (
    C_value,
    SIX_OVER_PI2,
    ap_mean,
    ap_variance_factor,
    constant_C,
    constants_summary,
    is_prime,
    prime_divisors,
    zeta_real,
)
from sqfree_lab.errors import DomainError, PreconditionError

C_TRUE = float(C_oracle())


@pytest.mark.parametrize("s,exact", [(2, math.pi**2 / 6), (4, math.pi**4 / 90)])
def test_zeta_even(s, exact):
    assert abs(zeta_real(s) - exact) < 1e-14


def test_zeta_three_halves():
    assert abs(zeta_real(1.5) - 2.612375348685488) < 1e-14


@pytest.mark.parametrize("s", [1.0, 0.5, -2.0])
def test_zeta_domain(s):
    with pytest.raises(DomainError):
        zeta_real(s)


def test_C_brackets_the_oracle():
    for P in (10**5, 10**6, 10**7):
        c = constant_C(P)
        assert abs(c.value - C_TRUE) <= c.tail_bound
    assert abs(C_value() - C_TRUE) < 1e-7


def test_C_truncation_two():
    c = constant_C(2)
    assert c.product == pytest.approx(0.5)
    # the bracket's upper end is the bare truncated product
    assert c.value + c.tail_bound == pytest.approx(zeta_real(1.5) / math.pi * 0.5)


def test_summary_keys():
    s = constants_summary(10**5)
    assert s["six_over_pi2"] == SIX_OVER_PI2
    assert 0.23 < s["C"] < 0.25


def test_prime_helpers():
    assert prime_divisors(360) == [2, 3, 5]
    assert is_prime(100003) and not is_prime(100001)
    assert ap_variance_factor(5) == pytest.approx(5 / 7)
    assert ap_mean(20, 5) == pytest.approx(SIX_OVER_PI2 * 4 * 25 / 24)
    with pytest.raises(PreconditionError):
        ap_variance_factor(1)


@given(st.integers(2, 10**6))
def test_prime_divisors_reconstruct(n):
    ps = prime_divisors(n)
    m = n
    for p in ps:
        assert is_prime(p)
        while m % p == 0:
            m //= p
    assert m == 1
