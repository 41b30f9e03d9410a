import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from anacomb.numerics import (
    alpha_constant,
    binomial,
    catalan,
    dyadic,
    euler_gamma,
    gamma_real,
    harmonic,
    q_infinity,
    qpoch,
    zeta,
)


def test_binomial_small_and_out_of_range():
    assert binomial(4, 2) == 6
    assert binomial(6, -1) == 0
    assert binomial(6, 7) == 0


def test_binomial_large_digit_count():
    c = binomial(8192, 4096)
    # log10 of the central binomial from Stirling: 4^m / sqrt(pi m)
    est = 8192 * math.log10(2) - 0.5 * math.log10(math.pi * 4096)
    digits = str(c)
    assert len(digits) == math.floor(est) + 1 == 2464
    lead = int(digits[:7]) / 10**6
    assert abs(lead / 10 ** (est - math.floor(est)) - 1) < 1e-4


def test_pascal_rule():
    for n in range(1, 101):
        for k in range(0, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_catalan_matches_ratio_formula():
    assert [catalan(n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert catalan(12) == 208012


def test_harmonic_examples():
    assert harmonic(2, 1) == Fraction(3, 2)
    assert harmonic(0, 5) == 0
    assert harmonic(3, 2) == Fraction(49, 36)
    with pytest.raises(ValueError):
        harmonic(3, 0)


def test_harmonic_telescoping():
    for j in range(1, 5):
        for n in range(1, 201):
            assert harmonic(n, j) - harmonic(n - 1, j) == Fraction(1, n**j)


def test_qpoch_values_and_recurrence():
    assert qpoch(0) == 1
    assert qpoch(2) == Fraction(3, 8)
    assert qpoch(3) == Fraction(21, 64)
    for n in range(1, 65):
        assert qpoch(n) == qpoch(n - 1) * (1 - Fraction(1, 2**n))


def test_q_infinity():
    assert abs(q_infinity(1e-6) - 0.288788) < 1e-6
    assert 0.28 < q_infinity(0.5) < 0.30
    # Q_n = Q_inf / Q(2^-n), and Q(2^-40) is 1 to about 1e-12
    assert abs(q_infinity(1e-12) / float(qpoch(40)) - 1) < 1e-9
    direct = math.prod(1 - 2.0**-i for i in range(1, 80))
    assert abs(q_infinity(1e-15) - direct) < 1e-15


def test_alpha_constant():
    direct = math.fsum(1 / (2.0**k - 1) for k in range(1, 80))
    assert abs(alpha_constant(1e-10) - direct) < 1e-10
    assert abs(alpha_constant(1e-10) - 1.6066951524) < 1e-10
    assert 1.5 < alpha_constant(0.5) < 1.7


def test_euler_gamma_matches_numpy_constant():
    assert abs(euler_gamma() - np.euler_gamma) < 1e-15


@pytest.mark.parametrize("s", [0.5, 1.5, 2, 3, 4, 6, 10])
def test_zeta_against_scipy(s):
    assert abs(zeta(s, 1e-14) - special.zeta(s)) < 1e-13 * max(1, special.zeta(s))


def test_zeta_domain():
    with pytest.raises(ValueError):
        zeta(1)
    with pytest.raises(ValueError):
        zeta(-0.5)


@given(st.floats(min_value=0.01, max_value=30))
def test_gamma_real_against_math(x):
    assert abs(gamma_real(x) / math.gamma(x) - 1) < 1e-12


@given(st.integers(min_value=-(10**30), max_value=10**30), st.integers(min_value=0, max_value=200))
def test_dyadic_matches_fraction(num, e):
    assert dyadic(num, e) == Fraction(num, 2**e)
