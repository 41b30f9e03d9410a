import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anacomb.numerics import catalan
from anacomb.register import (
    LEAF,
    Node,
    brute_force_census,
    count_register,
    enumerate_trees,
    reg,
    register_census,
    register_d0,
    register_mean,
    register_series,
    register_weighted_sum,
)
from anacomb.series import Series


def _cherry():
    return Node(LEAF, LEAF)


def test_reg_basics():
    assert reg(LEAF) == 0
    assert reg(_cherry()) == 1
    assert reg(Node(LEAF, _cherry())) == 1


def test_reg_of_illustrated_tree():
    # left child: a leaf and a cherry; right child: two cherries
    t = Node(Node(LEAF, _cherry()), Node(_cherry(), _cherry()))
    assert reg(t) == 2


def test_enumeration_counts():
    assert [type(t).__name__ for t in enumerate_trees(0)] == ["Leaf"]
    assert sum(1 for _ in enumerate_trees(3)) == 5
    assert sum(1 for _ in enumerate_trees(12)) == 208012


def test_enumeration_is_distinct():
    def shape(t):
        return "." if t is LEAF else f"({shape(t.left)}{shape(t.right)})"

    for n in range(8):
        shapes = [shape(t) for t in enumerate_trees(n)]
        assert len(shapes) == len(set(shapes)) == catalan(n)


def test_enumeration_limit():
    with pytest.raises(ValueError):
        next(enumerate_trees(15))


def test_register_series_examples():
    assert list(register_series(0, 6).coeffs) == [1, 0, 0, 0, 0, 0, 0]
    assert list(register_series(1, 6).coeffs) == [0, 1, 2, 4, 8, 16, 32]
    assert register_series(2, 3)[3] == 1


def test_count_register_examples():
    assert count_register(3, 1) == 4
    assert count_register(3, 2) == 1
    assert count_register(2, 2) == 0


def test_weighted_sum_and_mean():
    assert register_weighted_sum(1) == 1
    assert register_weighted_sum(2) == 2
    assert register_weighted_sum(3) == 6
    assert register_mean(3) == Fraction(6, 5)
    assert register_mean(1) == 1


def test_d0():
    assert abs(register_d0(1e-6) - 0.29243) < 1e-5
    expected = 0.5 - np.euler_gamma / (2 * math.log(2)) - 1 / math.log(2) + math.log2(math.pi)
    assert abs(register_d0() - expected) < 1e-14


@pytest.mark.parametrize("n", range(0, 11))
def test_census_matches_enumeration(n):
    assert register_census(n).counts == brute_force_census(n).counts


def test_census_totals_are_catalan():
    for n in range(0, 13):
        assert register_census(n).total() == catalan(n)


def test_series_coefficients_match_counts():
    for p in range(1, 5):
        s = register_series(p, 30)
        for n in range(1, 31):
            assert s[n] == count_register(n, p)


def test_substitution_closed_form():
    order = 30
    u = Series.variable(order)
    z = u / (1 + u) ** 2
    for p in range(0, 4):
        lhs = register_series(p, order).compose(z)
        m = 1 << p
        # (1 - u^2)/u * u^m / (1 - u^(2m)) = (1 - u^2) u^(m-1) / (1 - u^(2m))
        num = Series([0] * (m - 1) + [1], order) * (1 - u * u)
        rhs = num / (1 - Series([0] * (2 * m) + [1], order))
        assert lhs == rhs, p


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=400))
def test_weighted_sum_matches_census(n):
    counts = register_census(n).counts
    assert register_weighted_sum(n) == sum(p * c for p, c in counts.items())
    assert sum(counts.values()) == catalan(n)
