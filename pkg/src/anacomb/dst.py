"""Digital search trees: insertion, endnodes and the mean endnode count.

The mean l_n is computed from the binomial recurrence, from the Poisson
transformed sequence (iteration and closed form), from the alternating
closed formula, and from the derivative of the exact distribution F_n(z).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numerics import alpha_constant, binomial, dyadic, mpz, q_infinity, qpoch
from .rng import batch_generator, batch_sizes, run_batches
from .series import Series

__all__ = [
    "RandomKey",
    "DSTree",
    "EndnodePoly",
    "endnode_poly",
    "ell_recurrence",
    "ell_hat",
    "ell_hat_closed",
    "ell_from_hat",
    "r_exact",
    "ell_closed",
    "r_star",
    "r_star_partial_fractions",
    "dst_constant",
    "euler_identity_checks",
    "simulate_dst",
    "ENDNODE_CAP",
]

ENDNODE_CAP = 64


class RandomKey:
    """An unbounded key whose bits are fair coin flips drawn on demand."""

    def __init__(self, rng: random.Random):
        self._rng = rng
        self._bits: list = []

    def __getitem__(self, i: int) -> str:
        while len(self._bits) <= i:
            self._bits.append("1" if self._rng.getrandbits(1) else "0")
        return self._bits[i]

    def __len__(self) -> int:  # never the limiting factor
        return 1 << 62


class _Node:
    __slots__ = ("key", "left", "right")

    def __init__(self, key):
        self.key = key
        self.left = None
        self.right = None


class DSTree:
    """Keys sit at nodes; a new key follows its bits (0 left, 1 right) to the first vacancy."""

    def __init__(self):
        self.root = None
        self.size = 0

    def insert(self, key) -> "DSTree":
        if self.root is None:
            self.root = _Node(key)
            self.size = 1
            return self
        node = self.root
        depth = 0
        while True:
            if depth >= len(key):
                raise ValueError(f"key {key!r} ran out of bits at depth {depth}")
            bit = key[depth]
            if bit not in ("0", "1"):
                raise ValueError(f"key bits must be '0' or '1', got {bit!r}")
            side = "left" if bit == "0" else "right"
            child = getattr(node, side)
            if child is None:
                setattr(node, side, _Node(key))
                self.size += 1
                return self
            node = child
            depth += 1

    def nodes(self):
        stack = [self.root] if self.root else []
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for c in (node.right, node.left) if c is not None)

    def count_endnodes(self) -> int:
        return sum(1 for v in self.nodes() if v.left is None and v.right is None)


@dataclass(frozen=True)
class EndnodePoly:
    """Distribution of the endnode count: coeffs[k] = P(k endnodes) at size n."""

    n: int
    coeffs: tuple

    @property
    def series(self) -> Series:
        return Series(self.coeffs)

    def mean(self) -> Fraction:
        """F_n'(1)."""
        return sum((k * c for k, c in enumerate(self.coeffs)), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def rows(self):
        for k, c in enumerate(self.coeffs):
            if c:
                yield {"n": self.n, "k": k, "probability": c}


@lru_cache(maxsize=None)
def _endnode_scaled(n: int):
    """(integer coefficients, e) with F_n = poly / 2^e."""
    if n == 0:
        return (1,), 0
    if n == 1:
        return (0, 1), 0
    m = n - 1
    parts = []
    for k in range(m + 1):
        a, ea = _endnode_scaled(k)
        b, eb = _endnode_scaled(m - k)
        parts.append((binomial(m, k), a, b, ea + eb))
    e = max(p[3] for p in parts)
    size = max(len(a) + len(b) - 1 for _, a, b, _ in parts)
    out = [0] * size
    for c, a, b, ek in parts:
        w = c << (e - ek)
        for i, x in enumerate(a):
            if x:
                xw = x * w
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += xw * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out), e + m


def endnode_poly(n: int, cap: int = ENDNODE_CAP) -> EndnodePoly:
    """F_n(z) from F_{n+1} = sum_k 2^-n C(n,k) F_k F_{n-k}, F_0 = 1, F_1 = z."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > cap:
        raise ValueError(f"endnode_poly size {n} exceeds cap {cap}")
    poly, e = _endnode_scaled(n)
    return EndnodePoly(n, tuple(dyadic(c, e) for c in poly))


_ELL = [Fraction(0), Fraction(1)]


def ell_recurrence(n: int) -> Fraction:
    """l_{n+1} = 2^(1-n) sum_k C(n,k) l_k, l_0 = 0, l_1 = 1."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    while len(_ELL) <= n:
        m = len(_ELL) - 1
        s = sum((binomial(m, k) * _ELL[k] for k in range(m + 1)), Fraction(0))
        _ELL.append(s * 2 / (1 << m) if m >= 1 else s * 2)
    return _ELL[n]


def ell_hat(n: int) -> Fraction:
    """Poisson-transformed mean, by iterating l^_{n+1} = (-1)^n - (1 - 2^(1-n)) l^_n."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    h = Fraction(0)
    for m in range(n):
        h = (-1) ** m - (1 - Fraction(2, 1) / (1 << m)) * h
    return h


def ell_hat_closed(n: int) -> Fraction:
    """(-1)^(n+1) Q_{n-2} (1/Q_0 + ... + 1/Q_{n-2}) for n >= 2."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n < 2:
        return Fraction(n)
    return (-1) ** (n + 1) * r_exact(n - 2)


def ell_from_hat(n: int) -> Fraction:
    """l_n = sum_k C(n,k) l^_k, since L(z) = e^z L^(z)."""
    return sum((binomial(n, k) * ell_hat(k) for k in range(n + 1)), Fraction(0))


def r_exact(n: int) -> Fraction:
    """R_n = Q_n (1/Q_0 + ... + 1/Q_n)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    # R_n = 1 + (1 - 2^-n) R_{n-1}
    r = Fraction(1)
    for m in range(1, n + 1):
        r = 1 + (1 - Fraction(1, 1 << m)) * r
    return r


def ell_closed(n: int) -> Fraction:
    """l_n = n - sum_{k>=2} C(n,k) (-1)^k R_{k-2}, exactly.

    With T(j) = j(j+1)/2, N_j = 2^T(j) R_j is an integer obeying
    N_j = 2^T(j) + (2^j - 1) N_{j-1}; the sum is accumulated over the common
    denominator 2^T(n-2) so only one huge division happens at the end.
    """
    if n < 2:
        raise ValueError(f"ell_closed needs n >= 2, got {n}")
    N = mpz(1)
    acc = mpz(0)
    c = mpz(n)  # C(n, 1)
    for k in range(2, n + 1):
        j = k - 2
        if j > 0:
            N = (mpz(1) << (j * (j + 1) // 2)) + (N << j) - N
            acc <<= j
        c = c * (n - k + 1) // k
        term = c * N
        acc += term if k % 2 == 0 else -term
    return n - dyadic(acc, (n - 2) * (n - 1) // 2)


def r_star(z: float, tol: float = 1e-12) -> float:
    """R*(z) = sum_{j>=0} (z+1+j-alpha) 2^(-z-1-j) / prod_{m=1..j+1} (1 - 2^(-z-m)).

    At z = -1 the leading factor of every denominator vanishes while the
    numerators sum to zero (both Euler identities), so the value is the
    derivative of the summand, which works out to
    (1/log 2) sum_j 2^-j/Q_j [1 - (j - alpha) log 2 (1 + sum_{m<=j} 1/(2^m - 1))].
    Consecutive terms have ratio at most
    rho_j = (1 + 1/(z+1+j-alpha)) / (2 (1 - 2^(-z-2-j))), decreasing in j
    once z+1+j > alpha, so the tail is below |t_j| rho_j/(1-rho_j).
    """
    if z != -1 and z < -1 and float(z).is_integer():
        raise ValueError(f"R* series has a pole factor at z={z}")
    alpha = alpha_constant(tol / 8)
    if z == -1:
        return _r_star_limit(alpha, tol)
    total = 0.0
    den = 1.0
    j = 0
    while j < 100_000:
        den *= 1 - 2.0 ** (-z - 1 - j)
        term = (z + 1 + j - alpha) * 2.0 ** (-z - 1 - j) / den
        total += term
        lin = z + 1 + j - alpha
        if lin > 0 and z + 2 + j > 0:
            rho = (1 + 1 / lin) / (2 * (1 - 2.0 ** (-z - 2 - j)))
            if rho < 1 and abs(term) * rho / (1 - rho) < tol / 2:
                return total
        j += 1
    raise ArithmeticError(f"R*({z}) did not converge within 100000 terms")


def _r_star_limit(alpha: float, tol: float) -> float:
    ln2 = math.log(2)
    total = 0.0
    q = 1.0
    h = 0.0
    j = 0
    while True:
        if j:
            q *= 1 - 2.0**-j
            h += 1 / (2.0**j - 1)
        term = 2.0**-j / q * (1 - (j - alpha) * ln2 * (1 + h))
        total += term
        # past j = 10 the ratio of successive terms stays below 0.6
        if j >= 10 and abs(term) * 1.5 < tol / 2 * ln2:
            return total / ln2
        j += 1


def r_star_partial_fractions(z: float, tol: float = 1e-12) -> float:
    """(1/Q_inf) sum_{j>=1} (-1)^(j-1) 2^-C(j,2) / Q_{j-1} (z+j) / (2^(z+j) - 1).

    The j with z + j = 0 uses the limit 1/log 2.  Terms fall like
    2^-C(j,2), so once one is below tol/4 the rest add less than it.
    """
    qinf = q_infinity(tol / 8)
    ln2 = math.log(2)
    total = 0.0
    for j in range(1, 2000):
        x = z + j
        frac = 1 / ln2 if x == 0 else x / math.expm1(x * ln2)
        term = (-1) ** (j - 1) * 2.0 ** (-(j * (j - 1) // 2)) / float(qpoch(j - 1)) * frac
        total += term
        if j > 2 and x > 1 and abs(term) / qinf < tol / 4:
            return total / qinf
    raise ArithmeticError("partial-fraction series did not converge")


def dst_constant(tol: float = 1e-12) -> dict:
    """alpha + 1 - R*(-1), the slope of l_n, with the pieces that make it up."""
    alpha = alpha_constant(tol)
    rs = r_star(-1, tol)
    return {
        "Q_inf": q_infinity(tol),
        "alpha": alpha,
        "R_star_minus1": rs,
        "R_star_minus1_pf": r_star_partial_fractions(-1, tol),
        "constant": alpha + 1 - rs,
    }


def euler_identity_checks(tol: float = 1e-12, terms: int = 60) -> list:
    """Rows comparing the Euler partition identity sides at t = q = 1/2 and t = 1/3."""
    qinf = q_infinity(tol / 10)
    alpha = alpha_constant(tol / 10)
    s0 = math.fsum(2.0**-l / float(qpoch(l)) for l in range(terms + 1))
    s1 = math.fsum(l * 2.0**-l / float(qpoch(l)) for l in range(terms + 1))
    t = 1 / 3
    lhs = math.fsum(t**n / float(qpoch(n)) for n in range(terms + 1))
    prod = 1.0
    m = 0
    while t * 2.0**-m > tol / 100:
        prod *= 1 - t * 2.0**-m
        m += 1
    rows = [
        ("sum 2^-l/Q_l = 1/Q_inf", s0, 1 / qinf),
        ("sum l 2^-l/Q_l = alpha/Q_inf", s1, alpha / qinf),
        ("sum t^n/Q_n = 1/(t;1/2)_inf at t=1/3", lhs, 1 / prod),
    ]
    return [
        {"identity": name, "lhs": a, "rhs": b, "diff": abs(a - b), "tol": tol, "pass": abs(a - b) <= tol}
        for name, a, b in rows
    ]


def _dst_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Endnode counts of ``size`` trees built by inserting n random keys."""
    if n == 0:
        return np.zeros(size, dtype=np.int64)
    children = np.full((size, n, 2), -1, dtype=np.int32)
    rows = np.arange(size)
    for i in range(1, n):
        cur = np.zeros(size, dtype=np.int32)
        pending = np.ones(size, dtype=bool)
        while pending.any():
            idx = rows[pending]
            bit = (rng.bit_generator.random_raw(idx.size) & np.uint64(1)).astype(np.intp)
            nxt = children[idx, cur[idx], bit]
            vacant = nxt < 0
            children[idx[vacant], cur[idx[vacant]], bit[vacant]] = i
            cur[idx[~vacant]] = nxt[~vacant]
            pending[idx[vacant]] = False
    leafy = (children[:, :, 0] < 0) & (children[:, :, 1] < 0)
    return leafy.sum(axis=1)


def simulate_dst(n: int, trials: int, seed: int = 0, batch: int = 50_000) -> dict:
    """Mean and sample variance of the endnode count over random key sets."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")

    def work(b: int, size: int):
        c = _dst_batch(n, size, batch_generator(seed, b))
        return int(c.sum()), int((c * c).sum())

    s1 = s2 = 0
    for a, b in run_batches(work, batch_sizes(trials, batch)):
        s1 += a
        s2 += b
    mean = s1 / trials
    var = (s2 - s1 * s1 / trials) / (trials - 1) if trials > 1 else 0.0
    return {"n": n, "trials": trials, "mean": mean, "variance": var}
