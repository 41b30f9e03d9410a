"""Harmonic-number identities, Euler sums, and Ramanujan's Q and R functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .numerics import binomial, euler_gamma, gamma_real, harmonic, zeta
from .series import Series

__all__ = [
    "HarmonicProfile",
    "alt_binom_sum",
    "harmonic_exp_extract",
    "harmonic_evaluations",
    "EulerSum",
    "euler_sum",
    "euler_sum_targets",
    "ramanujan_Q",
    "ramanujan_R",
    "ramanujan_R_bracket",
    "theta_k",
    "K_INTERVAL",
    "tree_function",
    "q_asymptotic_check",
    "master_theorem_check",
]


@dataclass(frozen=True)
class HarmonicProfile:
    n: int
    H: tuple  # H[j-1] = H_n^(j)

    @classmethod
    def build(cls, n: int, m_max: int) -> "HarmonicProfile":
        return cls(n, tuple(harmonic(n, j) for j in range(1, m_max + 1)))


def alt_binom_sum(n: int, m: int) -> Fraction:
    """sum_{k=1..n} C(n,k) (-1)^(k-1) / k^m."""
    if n < 1 or m < 1:
        raise ValueError(f"alt_binom_sum needs n, m >= 1, got n={n}, m={m}")
    return sum((Fraction((-1) ** (k - 1) * binomial(n, k), k**m) for k in range(1, n + 1)), Fraction(0))


def harmonic_exp_extract(n: int, m: int) -> Fraction:
    """[z^m] exp(sum_j H_n^(j) z^j / j)."""
    if n < 1 or m < 1:
        raise ValueError(f"harmonic_exp_extract needs n, m >= 1, got n={n}, m={m}")
    prof = HarmonicProfile.build(n, m)
    inner = Series([0] + [prof.H[j - 1] / j for j in range(1, m + 1)])
    return inner.exp()[m]


def harmonic_evaluations(n: int) -> dict:
    """The first three coefficients written out in harmonic numbers."""
    h1, h2, h3 = harmonic(n, 1), harmonic(n, 2), harmonic(n, 3)
    return {
        1: h1,
        2: (h1**2 + h2) / 2,
        3: h1**3 / 6 + h1 * h2 / 2 + h3 / 3,
    }


@dataclass(frozen=True)
class EulerSum:
    p: int
    q: int
    value: float
    lower: float
    upper: float
    terms: int

    @property
    def halfwidth(self) -> float:
        return (self.upper - self.lower) / 2


def _log_power_integral(a: float, s: float) -> float:
    """int_a^inf log(x) x^-s dx for s > 1."""
    return a ** (1 - s) * (math.log(a) / (s - 1) + 1 / (s - 1) ** 2)


def _power_integral(a: float, s: float) -> float:
    return a ** (1 - s) / (s - 1)


def _tail_bracket(p: int, q: int, N: int, zp: float, gamma: float) -> tuple:
    """Bounds on sum_{n>N} H_n^(p) / n^q by comparison with integrals.

    p = 1:  log n + gamma <= H_n <= log n + gamma + 1/(2n).
    p >= 2: zeta(p) - 1/((p-1) n^(p-1)) <= H_n^(p) <= zeta(p).
    All the bounding summands decrease for n > N >= 16, so
    int_{N+1}^inf f <= sum_{n>N} f(n) <= int_N^inf f.
    """
    if p == 1:
        lo = _log_power_integral(N + 1, q) + gamma * _power_integral(N + 1, q)
        hi = _log_power_integral(N, q) + gamma * _power_integral(N, q) + 0.5 * _power_integral(N, q + 1)
    else:
        lo = zp * _power_integral(N + 1, q) - _power_integral(N, p - 1 + q) / (p - 1)
        hi = zp * _power_integral(N, q)
    return lo, hi


def euler_sum(p: int, q: int, tol: float = 1e-8) -> EulerSum:
    """S_{p,q} = sum_{n>=1} H_n^(p) / n^q with a certified enclosure of width <= tol.

    The partial sum grows N by doubling until the integral-comparison tail
    bracket is narrow enough; a rounding allowance of N * 2^-50 times the
    partial sum is added to both sides.
    """
    if p < 1:
        raise ValueError(f"euler_sum needs p >= 1, got {p}")
    if q < 2:
        raise ValueError(f"euler_sum needs q >= 2 for convergence, got {q}")
    zp = zeta(p, 1e-16) if p >= 2 else 0.0
    gamma = euler_gamma()
    N = 1024
    while True:
        lo, hi = _tail_bracket(p, q, N, zp, gamma)
        if hi - lo <= tol / 2 or N > 1 << 26:
            break
        N *= 2
    n = np.arange(1, N + 1, dtype=np.float64)
    H = np.cumsum(n**-p)
    partial = math.fsum(H / n**q)
    slack = N * 2.0**-50 * partial
    lower = partial + lo - slack
    upper = partial + hi + slack
    if upper - lower > tol:
        raise ArithmeticError(f"could not certify S_{p},{q} to {tol}")
    return EulerSum(p, q, (lower + upper) / 2, lower, upper, N)


def euler_sum_targets(tol: float = 1e-12) -> dict:
    """Zeta-value closed forms for the three sums checked here."""
    z3, z4, z6 = zeta(3, tol), zeta(4, tol), zeta(6, tol)
    return {(1, 2): 2 * z3, (1, 3): 1.25 * z4, (2, 4): z3 * z3 - z6 / 3}


def ramanujan_Q(n: int) -> Fraction:
    """1 + (n-1)/n + (n-1)(n-2)/n^2 + ..., which stops after n terms."""
    if n < 1:
        raise ValueError(f"ramanujan_Q needs n >= 1, got {n}")
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n):
        total += term
        term = term * (n - 1 - k) / n
    return total


def ramanujan_R_bracket(n: int, tol: Fraction = Fraction(1, 10**30)) -> tuple:
    """Exact rationals (lo, hi) enclosing R(n) = 1 + n/(n+1) + n^2/((n+1)(n+2)) + ...

    After the term t_K the ratio of successive terms is at most
    n/(n+K+1), so the tail is below t_K n / (K+1).
    """
    if n < 1:
        raise ValueError(f"ramanujan_R needs n >= 1, got {n}")
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * n / (n + k)
        total += term
        tail = term * n / (k + 1)
        if tail < tol:
            return total, total + tail


def ramanujan_R(n: int, tol: float = 1e-15) -> float:
    lo, hi = ramanujan_R_bracket(n, Fraction(tol) / 2)
    return float((lo + hi) / 2)


K_INTERVAL = (Fraction(2, 21), Fraction(8, 45))


def theta_k(n: int) -> dict:
    """D = R(n) - Q(n), theta = D/2 and k from D = 2/3 + 8/(135 (n + k)).

    k_lo, k_hi come from the exact bracket on R, so the interval test is
    certified.  ``inside`` reports 2/21 < k < 8/45 for the whole bracket.
    """
    q = ramanujan_Q(n)
    r_lo, r_hi = ramanujan_R_bracket(n)
    d_lo, d_hi = r_lo - q, r_hi - q
    two3 = Fraction(2, 3)
    if d_lo <= two3 <= d_hi:
        raise ZeroDivisionError(f"R(n) - Q(n) is not separated from 2/3 at n={n}")
    # k decreases as D grows
    k_hi = Fraction(8, 135) / (d_lo - two3) - n
    k_lo = Fraction(8, 135) / (d_hi - two3) - n
    a, b = K_INTERVAL
    return {
        "n": n,
        "D": float(d_lo),
        "theta": float(d_lo / 2),
        "k": float((k_lo + k_hi) / 2),
        "k_lo": float(k_lo),
        "k_hi": float(k_hi),
        "inside": a < k_lo and k_hi < b,
    }


def tree_function(order: int) -> Series:
    """y = z e^y by fixed-point iteration; each round fixes one more coefficient."""
    if order < 1:
        raise ValueError("order must be >= 1")
    z = Series.variable(order)
    y = Series.constant(0, order)
    for _ in range(order + 1):
        nxt = z * y.exp()
        if nxt == y:
            break
        y = nxt
    return y


def q_asymptotic_check(n: int, bound: float | None = None) -> dict:
    """|Q(n) - sqrt(pi n / 2) + 1/3| against ``bound`` (default n^-1/2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if bound is None:
        bound = n**-0.5
    q = float(ramanujan_Q(n))
    err = abs(q - math.sqrt(math.pi * n / 2) + 1 / 3)
    return {"n": n, "Q": q, "error": err, "bound": bound, "pass": err <= bound}


def master_theorem_check(s: float, tol: float = 1e-8) -> dict:
    """Both sides for lambda(u) = 1/Gamma(1+u), whose alternating series is e^-x.

    Left: int_0^inf x^(s-1) e^-x dx by adaptive quadrature, with the x^(s-1)
    singularity on [0, 1] handled as an algebraic weight.  Right:
    pi / sin(pi s) / Gamma(1-s), with Gamma from the Stirling routine.
    """
    if not 0 < s < 1:
        raise ValueError(f"master theorem check needs 0 < s < 1, got {s}")
    head, e1 = integrate.quad(lambda x: math.exp(-x), 0, 1, weight="alg", wvar=(s - 1, 0), epsabs=tol / 10, epsrel=0)
    tail, e2 = integrate.quad(lambda x: x ** (s - 1) * math.exp(-x), 1, math.inf, epsabs=tol / 10, epsrel=0)
    lhs = head + tail
    rhs = math.pi / math.sin(math.pi * s) / gamma_real(1 - s)
    return {
        "s": s,
        "lhs": lhs,
        "rhs": rhs,
        "diff": abs(lhs - rhs),
        "quad_error": e1 + e2,
        "tol": tol,
        "pass": abs(lhs - rhs) <= tol,
    }
