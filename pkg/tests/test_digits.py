from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anacomb.digits import (
    PERRON_BATTERY,
    DigitTable,
    FiniteDirichlet,
    delange_F,
    delange_sum,
    gray_bits,
    gray_telescope_check,
    gray_value,
    merge_sum,
    perron_lhs,
    perron_rhs_numeric,
    s2,
    s_gray,
    theta_sign,
    v2,
)
from anacomb.fm import nu
from anacomb.numerics import binomial

N = 100_000


def test_v2_s2_examples():
    assert v2(12) == 2
    assert v2(1) == 0
    assert s2(4) == 4 - sum(v2(k) for k in range(1, 5)) == 1


def test_s2_identity_exhaustive():
    running = 0
    for n in range(1, N + 1):
        running += v2(n)
        assert s2(n) == n - running
        assert s2(n) - s2(n - 1) == 1 - v2(n)
        assert nu(n) == s2(n)


def test_delange():
    assert delange_sum(4) == 4
    assert delange_sum(2) == 1
    for n in range(1, 300):
        assert delange_sum(n) == sum(s2(m) for m in range(n))
    f = [delange_F(2**j) for j in range(1, 20)]
    assert all(x == f[0] for x in f)


def test_delange_envelope():
    assert max(abs(delange_F(n)) for n in range(1, 1 << 16)) <= 0.5


def test_theta():
    assert theta_sign(1) == 1
    assert theta_sign(6) == -1
    assert theta_sign(12) == -1


def test_gray_examples():
    assert gray_bits(6) == [1, 0, 1]
    assert s_gray(6) == 2
    assert gray_bits(0) == [0]


def test_gray_against_xor_and_adjacency():
    prev = 0
    for n in range(N + 1):
        g = gray_value(n)
        assert g == n ^ (n >> 1)
        if n:
            assert bin(g ^ prev).count("1") == 1
        prev = g


def test_telescoping():
    assert s_gray(6) - s_gray(5) == -1 == theta_sign(6)
    assert s_gray(1) == 1 == theta_sign(1)
    r = gray_telescope_check(N)
    assert r == {"N": N, "ok": True, "first_failure": None}


def test_merge_sum():
    assert merge_sum(1) == 1
    assert merge_sum(2) == 5


def test_merge_sum_matches_gray_partial_sums():
    # sum_k theta(k) C(2n, n-k) = sum_j C(2n, n-j) - C(2n, n-j-1) summed against S_GR(j),
    # i.e. Abel summation with theta(k) = S_GR(k) - S_GR(k-1)
    for n in range(1, 60):
        abel = sum(s_gray(j) * (binomial(2 * n, n - j) - binomial(2 * n, n - j - 1)) for j in range(1, n + 1))
        assert merge_sum(n) == abel


def test_digit_table_rows():
    rows = list(DigitTable.build(6).rows())
    assert rows[5] == {"n": 6, "v2": 1, "s2": 2, "theta": -1, "sgray": 2}


def test_perron_lhs_examples():
    assert perron_lhs(FiniteDirichlet({1: 1}), 4, 1) == Fraction(3, 4)
    assert perron_lhs(FiniteDirichlet({1: 1}), 2, 0) == 1
    assert perron_lhs(FiniteDirichlet({}), 5, 0) == 0


def test_perron_examples():
    r = perron_rhs_numeric(FiniteDirichlet({1: 1}), 4, 1, c=1.0, tol=1e-6)
    assert abs(r.value - 0.75) < 1e-6
    r = perron_rhs_numeric(FiniteDirichlet({1: 1}), 2, 0, c=1.0, tol=1e-4)
    assert abs(r.value - 1) < 1e-4
    r = perron_rhs_numeric(FiniteDirichlet({2: 1}), 2, 1, tol=1e-6)
    assert abs(r.value) < 1e-6


def test_perron_short_height_rejected():
    with pytest.raises(ValueError, match="use T >="):
        perron_rhs_numeric(FiniteDirichlet({1: 1}), 2, 0, T=10, tol=1e-4)


@pytest.mark.parametrize("case", range(len(PERRON_BATTERY)))
def test_perron_battery(case):
    sup, n, m = PERRON_BATTERY[case]
    lam = FiniteDirichlet(sup)
    r = perron_rhs_numeric(lam, n, m, tol=1e-4)
    assert abs(r.value - float(perron_lhs(lam, n, m))) <= 1e-4


@given(st.integers(min_value=1, max_value=10**12))
def test_theta_matches_odd_part(k):
    odd = k
    while odd % 2 == 0:
        odd //= 2
    assert theta_sign(k) == (1 if odd % 4 == 1 else -1)
