from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anacomb.series import BiSeries, Series, series_arith

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_exp_log_inverse_pair():
    one_plus_z = Series([1, 1], 8)
    assert series_arith(series_arith(one_plus_z, None, "log"), None, "exp") == one_plus_z


def test_geometric_reciprocal():
    assert list((1 / Series([1, -1], 10)).coeffs) == [1] * 11
    assert Series.geometric(1, 10) == 1 / Series([1, -1], 10)


def test_exp_of_z_plus_half_z2():
    s = Series([0, 1, Fraction(1, 2)], 4).exp()
    assert s[2] == 1


def test_orders_combine_to_minimum():
    a = Series([1, 2, 3], 5)
    b = Series([1, 1], 3)
    assert (a * b).order == 3
    assert (a + b).order == 3
    with pytest.raises(IndexError):
        (a * b)[4]


def test_division_by_series_with_zero_constant():
    with pytest.raises(ValueError, match="constant term"):
        series_arith(Series([1], 3), Series([0, 1], 3), "div")


def test_compose_and_bad_inner():
    z = Series.variable(6)
    geo = Series.geometric(1, 6)
    # 1/(1-w) at w = z/(1+z) equals 1 + z
    inner = z / (1 + z)
    assert geo.compose(inner) == Series([1, 1], 6)
    with pytest.raises(ValueError):
        geo.compose(Series([1, 1], 6))


@given(st.lists(small, min_size=1, max_size=8), st.lists(small, min_size=1, max_size=8))
def test_mul_div_round_trip(a, b):
    b = [Fraction(1) + abs(b[0])] + b[1:]
    n = 7
    A, B = Series(a, n), Series(b, n)
    assert (A * B) / B == A


@given(st.lists(small, min_size=1, max_size=8))
def test_exp_log_round_trip(a):
    A = Series([0] + a, 8)
    assert A.exp().log() == A
    B = Series([1] + a, 8)
    assert B.log().exp() == B


@given(st.lists(small, min_size=1, max_size=6))
def test_derivative_of_integral(a):
    A = Series(a, 5)
    assert A.integral().derivative() == A


def test_biseries_basic_ops():
    x = BiSeries.monomial(1, 1, 0, 4, 4)
    y = BiSeries.monomial(1, 0, 1, 4, 4)
    p = (x + y) * (x + y)
    assert p[1, 1] == 2 and p[2, 0] == 1 and p[0, 2] == 1
    assert p.scale(2, 3)[1, 1] == 12
    assert list(p.at_second(1).coeffs) == [1, 2, 1, 0, 0]
    assert p.shift(1, 1)[2, 2] == 2
