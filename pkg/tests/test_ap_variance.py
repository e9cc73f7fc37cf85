import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import ap_variance_brute, dft_orthogonality_brute
from sqfree_lab.ap_variance import (
    ap_variance,
    character_table,
    orthogonality_check,
    primitive_root,
    residue_counts,
)
from sqfree_lab.constants import is_prime
from sqfree_lab.errors import PreconditionError

PRIMES = [p for p in range(2, 200) if is_prime(p)]


def test_small_example():
    r = ap_variance(20, 5)
    assert r.class_counts.tolist() == [3, 3, 2, 2]
    want, _ = ap_variance_brute(20, 5)
    assert r.variance_paper_centered == pytest.approx(float(want), rel=1e-12)
    assert abs(r.variance_paper_centered - 0.2510909539) < 1e-9


@settings(max_examples=25, deadline=None)
@given(q=st.sampled_from(PRIMES), extra=st.integers(0, 2000))
def test_matches_oracle(q, extra):
    x = q + extra
    r = ap_variance(x, q)
    want, total = ap_variance_brute(x, q)
    assert r.sum_counts == total
    assert r.variance_paper_centered == pytest.approx(float(want), rel=1e-10, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(q=st.sampled_from(PRIMES[:20]), extra=st.integers(0, 3000))
def test_character_side_is_phi_times_centered_variance(q, extra):
    x = q + extra
    r = ap_variance(x, q)
    b = np.zeros(x)
    b[:] = [1.0 if c else 0.0 for c in _sqf_flags(x)]
    left, right = orthogonality_check(q, b)
    assert left == pytest.approx(r.variance_mean_centered * (q - 1), rel=1e-9, abs=1e-7)
    assert right == pytest.approx(left, rel=1e-9, abs=1e-7)
    shift = r.empirical_mean - r.paper_mean
    assert r.variance_paper_centered == pytest.approx(left / (q - 1) + shift**2, rel=1e-9)


def _sqf_flags(x):
    from sqfree_lab.sieve import squarefree_indicator

    return squarefree_indicator(1, x + 1).tolist()


def test_orthogonality_examples():
    left, right = orthogonality_check(3, [1, 1])
    assert abs(left) < 1e-12 and abs(right) < 1e-12
    left, right = orthogonality_check(7, np.arange(1, 100))
    assert left == pytest.approx(right, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(q=st.sampled_from([3, 5, 7, 11, 13]), seed=st.integers(0, 10**6), n=st.integers(1, 60))
def test_orthogonality_vs_oracle(q, seed, n):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    left, right = orthogonality_check(q, b)
    ol, orr = dft_orthogonality_brute(q, b.tolist())
    assert left * (q - 1) == pytest.approx(ol, rel=1e-9, abs=1e-9)
    assert right * (q - 1) == pytest.approx(orr, rel=1e-9, abs=1e-9)


def test_character_table_is_multiplicative():
    q = 11
    chi = character_table(q)
    for a in range(1, q):
        for b in range(1, q):
            assert np.allclose(chi[:, a * b % q], chi[:, a] * chi[:, b])
    assert np.all(chi[:, 0] == 0)
    g = primitive_root(q)
    assert len({pow(g, k, q) for k in range(q - 1)}) == q - 1


def test_worker_independence():
    assert np.array_equal(residue_counts(4 * 10**7, 1009, 1), residue_counts(4 * 10**7, 1009, 3))


@pytest.mark.parametrize("x,q", [(20, 6), (4, 5), (100, 1)])
def test_preconditions(x, q):
    with pytest.raises(PreconditionError):
        ap_variance(x, q)
