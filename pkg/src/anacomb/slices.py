"""Level number sequences: n_1 = 1, n_j <= 2 n_{j-1}, total n.

H_n counts them.  Three exact routes (a memoized DP, slice-by-slice
substitution on a bivariate series, and the quotient of two alternating
q-series) plus the dominant pole of that quotient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .series import BiSeries, Series

__all__ = [
    "count_dp",
    "SliceState",
    "slice_start",
    "slice_iterate",
    "slice_counts",
    "gf_closed",
    "closed_denominator",
    "dominant_pole",
    "growth_fit",
]


@lru_cache(maxsize=None)
def _extensions(remaining: int, last: int) -> int:
    """Ways to finish a sequence whose last entry is ``last`` using exactly ``remaining`` more."""
    if remaining == 0:
        return 1
    return sum(_extensions(remaining - x, x) for x in range(1, min(2 * last, remaining) + 1))


def count_dp(n: int) -> int:
    if n < 1:
        raise ValueError(f"count_dp needs n >= 1, got {n}")
    if n > 400:
        # keep the recursion shallow by warming the table bottom-up
        for r in range(0, n, 200):
            for last in range(1, n + 1):
                _extensions(r, last)
    return _extensions(n - 1, 1)


@dataclass(frozen=True)
class SliceState:
    """F_k(q, u): [q^n u^j] counts height-k sequences of total n ending in j."""

    k: int
    F: BiSeries

    @property
    def order(self) -> int:
        return self.F.order1


def slice_start(order: int) -> SliceState:
    """F_1 = uq, with the u-order equal to the q-order (an entry never exceeds the total)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return SliceState(1, BiSeries.monomial(1, 1, 1, order, order))


def slice_iterate(s: SliceState) -> SliceState:
    """Add a slice: every u^j becomes uq + (uq)^2 + ... + (uq)^(2j)."""
    N = s.F.order1
    M = s.F.order2
    out = [[0] * (M + 1) for _ in range(N + 1)]
    for n, j, c in s.F.nonzero():
        for i in range(1, 2 * j + 1):
            if n + i > N or i > M:
                break
            out[n + i][i] += c
    return SliceState(s.k + 1, BiSeries(out, N, M))


def slice_counts(order: int) -> list:
    """[H_0, ..., H_order] by summing F_k(q, 1) over all heights."""
    s = slice_start(order)
    totals = [0] * (order + 1)
    while True:
        F1 = s.F.at_second(1)
        if not any(F1.coeffs):
            return totals
        for n, c in enumerate(F1.coeffs):
            totals[n] += int(c)
        s = slice_iterate(s)


def _exponent(j: int) -> int:
    return (1 << (j + 1)) - j - 2


def _alternating_sum(order: int, top: int) -> Series:
    """sum_{j>=1} (-1)^(j+1) q^e_j / prod_{i=1..j-1+top} (1 - q^(2^i - 1)), truncated."""
    total = Series.constant(0, order)
    j = 1
    while _exponent(j) <= order:
        den = Series.constant(1, order)
        for i in range(1, j + top):
            den = den * (1 - Series([0] * ((1 << i) - 1) + [1], order))
        term = Series([0] * _exponent(j) + [(-1) ** (j + 1)], order) / den
        total = total + term
        j += 1
    return total


def gf_closed(order: int) -> Series:
    """F(q, 1) through q^order as numerator / denominator.

    Numerator products stop at (1 - q^(2^(j-1) - 1)), denominator products
    at (1 - q^(2^j - 1)); j-terms with 2^(j+1) - j - 2 > order are dropped
    since they start beyond the truncation.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    num = _alternating_sum(order, 0)
    den = 1 - _alternating_sum(order, 1)
    return num / den


def closed_denominator(q: float, eps: float = 1e-18) -> float:
    """1 - sum_j (-1)^(j+1) q^e_j / prod_{i<=j} (1 - q^(2^i - 1)) for 0 < q < 1.

    Past the first few j the terms alternate and shrink, so the sum stops at
    the first term below eps, which then bounds the remainder.
    """
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    total = 0.0
    prod = 1.0
    prev = math.inf
    j = 1
    while True:
        prod *= 1 - q ** ((1 << j) - 1)
        mag = q ** _exponent(j) / prod
        total += mag if j % 2 else -mag
        if mag < eps and mag < prev:
            return 1 - total
        prev = mag
        j += 1
        if j > 60:
            raise ArithmeticError(f"denominator series did not settle at q={q}")


def dominant_pole(tol: float = 1e-12) -> float:
    """Smallest root of the closed-form denominator in (0, 1), by scan then bisection."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    step = 1 / 256
    lo = step
    flo = closed_denominator(lo)
    while lo + step < 1:
        hi = lo + step
        fhi = closed_denominator(hi)
        if (flo > 0) != (fhi > 0):
            break
        lo, flo = hi, fhi
    else:
        raise ArithmeticError("no sign change of the denominator in (0, 1)")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = closed_denominator(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def growth_fit(n: int, tol: float = 1e-13) -> tuple:
    """(H_n rho^n, H_n / H_(n-1)) with rho the dominant pole."""
    if n < 2:
        raise ValueError("growth_fit needs n >= 2")
    rho = dominant_pole(tol)
    h, h1 = count_dp(n), count_dp(n - 1)
    return float(Fraction(h) * Fraction(rho) ** n), h / h1
