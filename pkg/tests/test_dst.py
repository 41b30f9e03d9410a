import math
import random
from fractions import Fraction

import pytest

from anacomb.dst import (
    DSTree,
    RandomKey,
    dst_constant,
    ell_closed,
    ell_from_hat,
    ell_hat,
    ell_hat_closed,
    ell_recurrence,
    endnode_poly,
    euler_identity_checks,
    r_exact,
    r_star,
    r_star_partial_fractions,
    simulate_dst,
)
from anacomb.numerics import alpha_constant, binomial

FIGURE_KEYS = ["1001", "0110", "0000", "1111", "0100", "0101", "1101", "1110", "1100"]


def test_nine_key_example():
    t = DSTree()
    for k in FIGURE_KEYS:
        t.insert(k)
    assert t.size == 9
    assert t.count_endnodes() == 4
    ends = sorted(v.key for v in t.nodes() if v.left is None and v.right is None)
    assert ends == sorted(["0000", "0101", "1100", "1110"])


def test_small_trees():
    t = DSTree().insert("0")
    assert t.count_endnodes() == 1
    t.insert("1")
    assert t.count_endnodes() == 1


def test_key_exhaustion():
    t = DSTree().insert("00").insert("00").insert("00")
    with pytest.raises(ValueError, match="ran out of bits"):
        t.insert("00")


def test_random_keys_never_run_out():
    rng = random.Random(1)
    t = DSTree()
    for _ in range(200):
        t.insert(RandomKey(rng))
    assert t.size == 200


def test_endnode_poly_examples():
    assert endnode_poly(0).coeffs == (1,)
    assert endnode_poly(2).coeffs == (0, 1)
    assert endnode_poly(3).coeffs == (0, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        endnode_poly(65)


def test_endnode_poly_is_a_distribution_with_mean_ell():
    for n in range(0, 21):
        F = endnode_poly(n)
        assert F.total() == 1
        assert all(c >= 0 for c in F.coeffs)
        assert F.mean() == ell_recurrence(n)


def test_endnode_poly_against_enumeration():
    # all 2^(3(n-1)) choices of 3-bit keys for the n-1 later keys; with 3 bits
    # no key can run out when n <= 4
    import itertools

    for n in range(1, 5):
        counts = {}
        for keys in itertools.product(range(8), repeat=n - 1):
            t = DSTree().insert("000")
            for k in keys:
                t.insert(format(k, "03b"))
            e = t.count_endnodes()
            counts[e] = counts.get(e, 0) + 1
        total = 8 ** (n - 1)
        expect = {k: c for k, c in enumerate(endnode_poly(n).coeffs) if c}
        assert {k: Fraction(c, total) for k, c in counts.items()} == expect


def test_ell_examples():
    assert ell_recurrence(1) == 1
    assert ell_recurrence(2) == 1
    assert ell_recurrence(3) == Fraction(3, 2)
    assert ell_hat(0) == 0 and ell_hat(1) == 1
    assert ell_hat(2) == ell_hat_closed(2) == -1
    assert ell_hat(3) == ell_hat_closed(3) == Fraction(3, 2)
    assert ell_closed(2) == 1
    assert ell_closed(3) == Fraction(3, 2)
    assert ell_closed(10) == ell_recurrence(10)


def test_routes_agree_to_64():
    for n in range(2, 65):
        e = ell_recurrence(n)
        assert ell_closed(n) == e
        assert ell_from_hat(n) == e
        assert sum(binomial(n, k) * ell_hat_closed(k) for k in range(n + 1)) == e


def test_r_star_at_integers():
    alpha = alpha_constant(1e-15)
    for n in range(0, 8):
        assert abs(n + 1 - alpha + r_star(n) - float(r_exact(n))) < 1e-9


def test_r_star_forms_agree():
    for z in (-1, -0.5, 0, 1, 5):
        assert abs(r_star(z, 1e-12) - r_star_partial_fractions(z, 1e-12)) <= 2e-12


def test_r_star_limit_is_finite():
    v = r_star(-1)
    assert math.isfinite(v)
    # approaching -1 from the right matches the limit value
    assert abs(r_star(-1 + 1e-7) - v) < 1e-5


def test_constant():
    c = dst_constant()
    assert abs(c["Q_inf"] - 0.288788) < 1e-6
    assert abs(c["constant"] - 0.372048) < 1e-6


def test_euler_identities():
    for row in euler_identity_checks(1e-12):
        assert row["pass"], row


def test_simulation_small():
    assert simulate_dst(1, 100, seed=1)["mean"] == 1


@pytest.mark.slow
def test_simulation_n3():
    trials = 10**6
    r = simulate_dst(3, trials, seed=2)
    var = float(sum(k * k * c for k, c in enumerate(endnode_poly(3).coeffs))) - 1.5**2
    assert abs(r["mean"] - 1.5) <= 5 * math.sqrt(var / trials)


def test_simulation_n100():
    trials = 10**4
    r = simulate_dst(100, trials, seed=3)
    assert abs(r["mean"] - float(ell_recurrence(100))) <= 5 * math.sqrt(r["variance"] / trials)
