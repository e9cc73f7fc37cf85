import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_prime_trial
from sqfree_lab.constants import SIX_OVER_PI2
from sqfree_lab.errors import PreconditionError
from sqfree_lab.interval_variance import interval_variance
from sqfree_lab.sieve import squarefree_count
from sqfree_lab.stochastic import (
    figure_data,
    hurst_estimate,
    iid_sign_sequence,
    path_sample,
    prime_weights,
    window_sum,
)


def test_prime_path_example():
    p = path_sample("prime", 100, 10, 1.0, 1)
    want = (sum(math.log(q) for q in (101, 103, 107, 109)) - 10) / math.sqrt(10)
    assert p.values[-1] == pytest.approx(want, rel=1e-12)
    assert p.values[0] == 0.0


def test_squarefree_path_example():
    x, H = 10**6, 10**3
    p = path_sample("squarefree", x, H, 1.0, 4)
    want = (squarefree_count(x + H) - squarefree_count(x) - H * SIX_OVER_PI2) / H**0.25
    assert p.values[-1] == pytest.approx(want, rel=1e-12)


def test_zero_horizon():
    p = path_sample("squarefree", 1000, 10, 0.0, 5)
    assert p.values.tolist() == [0.0]


@settings(max_examples=30, deadline=None)
@given(x=st.integers(1, 10**6), H=st.integers(1, 200), steps=st.integers(1, 20), t=st.floats(0.0, 5.0))
def test_path_endpoint_matches_window_sum(x, H, steps, t):
    for kind, power in (("squarefree", 0.25), ("prime", 0.5)):
        p = path_sample(kind, x, H, t, steps)
        n = math.floor(t * H) if t > 0 else 0
        assert p.values[-1] == pytest.approx(window_sum(kind, x, n) / H**power, rel=1e-9, abs=1e-9)


def test_prime_weights_oracle():
    w = prime_weights(90, 120)
    want = [(math.log(n) if is_prime_trial(n) else 0.0) - 1.0 for n in range(90, 120)]
    assert np.allclose(w, want, rtol=0, atol=1e-15)


def test_exhaustive_hurst_links_to_interval_variance():
    X, Hs = 10**4, [25, 100]
    est = hurst_estimate("squarefree", X, Hs, trials=1, exhaustive=True)
    for H, v in zip(Hs, est.variances):
        assert v == pytest.approx(interval_variance(X, H).variance_mean_centered, rel=1e-12)
    assert est.trials == X and est.seed is None


def test_seeded_reproducibility():
    a = hurst_estimate("squarefree", 10**6, [16, 64, 256], 300, seed=7)
    b = hurst_estimate("squarefree", 10**6, [16, 64, 256], 300, seed=7)
    c = hurst_estimate("squarefree", 10**6, [16, 64, 256], 300, seed=7, workers=2)
    assert a.variances == b.variances == c.variances


def test_iid_hook_gives_half():
    seq = iid_sign_sequence(3)
    est = hurst_estimate("squarefree", 10**7, [2**6, 2**8, 2**10, 2**12], 5000, seed=1, sequence=seq)
    assert abs(est.implied_hurst - 0.5) < 0.05


def test_iid_sequence_is_consistent_across_windows():
    seq = iid_sign_sequence(11)
    assert np.array_equal(seq(100, 200)[50:], seq(150, 200))
    assert set(np.unique(seq(0, 1000)).tolist()) == {-1.0, 1.0}


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(H_values=[16]),
        dict(H_values=[64, 16]),
        dict(H_values=[16, 10**7]),
        dict(trials=0),
        dict(kind="bogus"),
    ],
)
def test_hurst_preconditions(kwargs):
    args = dict(kind="squarefree", X=10**6, H_values=[16, 64], trials=10)
    args.update(kwargs)
    with pytest.raises(PreconditionError):
        hurst_estimate(**args)


def test_figure_data(tmp_path):
    out = tmp_path / "fig.csv"
    assert figure_data("squarefree", 10**6, 1000, 10.0, 100, out) == 101
    lines = out.read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "t,value" and len(body) == 102
    out0 = tmp_path / "zero.csv"
    figure_data("prime", 10**6, 1000, 0.0, 100, out0)
    assert [l for l in out0.read_text().splitlines() if not l.startswith("#")][1:] == ["0.0,0.0"]
