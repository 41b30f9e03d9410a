import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anacomb.morris import (
    MorrisCounter,
    bivariate_iteration,
    mean_rice,
    pmf_closed,
    float_moments,
    pmf_dp,
    pmf_float,
    pmf_mean,
    pmf_variance,
    simulate,
    state_gf,
    step,
)


class _Bits:
    """Stands in for random.Random, replaying scripted getrandbits values."""

    def __init__(self, values):
        self.values = list(values)

    def getrandbits(self, k):
        return self.values.pop(0)


def test_step_advances_on_all_zero_bits():
    c = MorrisCounter(rng=_Bits([0]))
    assert step(c).level == 2


def test_step_stays_when_a_bit_is_set():
    for v in (1, 2, 4, 7):
        c = MorrisCounter(level=3, rng=_Bits([v]))
        assert step(c).level == 3


def test_long_run_lands_in_band():
    assert 10 <= MorrisCounter(seed=3).run(100_000) <= 24


def test_pmf_examples():
    assert pmf_dp(0) == {1: 1}
    assert pmf_dp(1) == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert pmf_dp(2) == {1: Fraction(1, 4), 2: Fraction(5, 8), 3: Fraction(1, 8)}
    assert pmf_closed(1, 2) == Fraction(1, 2)
    assert pmf_closed(2, 2) == Fraction(5, 8)
    assert pmf_closed(5, 1) == Fraction(1, 32)


def test_state_gf_examples():
    g = state_gf(1, 10)
    assert list(g.coeffs) == [Fraction(1, 2**n) for n in range(11)]
    assert state_gf(2, 4)[2] == Fraction(5, 8)
    assert state_gf(2, 4)[0] == 0


def test_mean_examples():
    assert mean_rice(0) == 1
    assert mean_rice(1) == Fraction(3, 2)
    assert mean_rice(2) == Fraction(15, 8)


def test_bivariate_examples():
    F = bivariate_iteration(4, 6)
    assert F[0, 1] == 1
    assert F[1, 2] == Fraction(1, 2)
    assert F[2, 3] == Fraction(1, 8)


def test_routes_agree_up_to_32():
    N = 32
    biv = bivariate_iteration(N, N + 2)
    gfs = {l: state_gf(l, N) for l in range(1, N + 2)}
    for n in range(N + 1):
        pmf = pmf_dp(n)
        assert sum(pmf.values()) == 1
        assert mean_rice(n) == pmf_mean(pmf)
        for level in range(1, n + 2):
            p = pmf.get(level, Fraction(0))
            assert pmf_closed(n, level) == p
            assert gfs[level][n] == p
            assert biv[n, level] == p


def test_general_q_in_state_gf():
    # with q = 1/3 the level-1 series is the geometric 1/(1 - 2z/3)
    g = state_gf(1, 5, q=Fraction(1, 3))
    assert list(g.coeffs) == [Fraction(2, 3) ** n for n in range(6)]


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=60))
def test_pmf_is_a_distribution(n):
    pmf = pmf_dp(n)
    assert sum(pmf.values()) == 1
    assert all(v > 0 for v in pmf.values())
    assert max(pmf) <= n + 1


def test_simulation_n0():
    assert simulate(0, 1000, seed=5) == {1: 1000}


def test_simulation_is_deterministic():
    assert simulate(50, 3000, seed=9, batch=1000) == simulate(50, 3000, seed=9, batch=1000)


def test_simulation_threads_agree(monkeypatch):
    serial = simulate(40, 4000, seed=2, batch=1000)
    monkeypatch.setenv("THREADS", "3")
    assert simulate(40, 4000, seed=2, batch=1000) == serial


@pytest.mark.slow
def test_simulated_level2_frequency():
    trials = 10**6
    hist = simulate(2, trials, seed=1)
    p = Fraction(5, 8)
    sigma = math.sqrt(float(p * (1 - p)) / trials)
    assert abs(hist[2] / trials - float(p)) <= 5 * sigma



@pytest.mark.parametrize("n", [0, 1, 2, 17, 80])
def test_float_pmf_tracks_exact(n):
    exact = pmf_dp(n)
    p = pmf_float(n)
    assert max(abs(p[k] - float(exact.get(k, 0))) for k in range(p.size)) < 1e-14
    mu, var = float_moments(n)
    assert mu == pytest.approx(float(pmf_mean(exact)), abs=1e-12)
    assert var == pytest.approx(float(pmf_variance(exact)), abs=1e-12)
