"""Approximate counting: the Morris counter and its exact level distribution.

The level after n increments is computed four ways (forward DP, the
partial-fraction closed form, the per-level generating function and the
bivariate functional iteration), plus a Monte Carlo histogram.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numerics import dyadic, mpz, qpoch
from .rng import batch_generator, batch_sizes, run_batches
from .series import BiSeries, Series

__all__ = [
    "MorrisCounter",
    "step",
    "pmf_dp",
    "pmf_float",
    "float_moments",
    "pmf_closed",
    "state_gf",
    "mean_rice",
    "pmf_mean",
    "pmf_variance",
    "bivariate_iteration",
    "simulate",
]

HALF = Fraction(1, 2)


@dataclass
class MorrisCounter:
    """Counter starting at level 1; from level k it advances w.p. 2^-k.

    The advance test draws ``level`` fair bits and succeeds iff all are 0,
    so the probability is exactly 2^-level.
    """

    seed: int | None = None
    level: int = 1
    rng: random.Random = field(default=None, repr=False)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.rng is None:
            self.rng = random.Random(self.seed)

    def increment(self) -> "MorrisCounter":
        if self.rng.getrandbits(self.level) == 0:
            self.level += 1
        return self

    def run(self, n: int) -> int:
        for _ in range(n):
            if self.rng.getrandbits(self.level) == 0:
                self.level += 1
        return self.level


def step(c: MorrisCounter) -> MorrisCounter:
    return c.increment()


def pmf_dp(n: int) -> dict:
    """Exact level distribution {level: probability} after n increments."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    p = {1: Fraction(1)}
    for _ in range(n):
        nxt: dict = {}
        for k, pk in p.items():
            up = Fraction(1, 1 << k)
            nxt[k] = nxt.get(k, 0) + pk * (1 - up)
            nxt[k + 1] = nxt.get(k + 1, 0) + pk * up
        p = nxt
    return {k: v for k, v in sorted(p.items()) if v}


def pmf_float(n: int) -> np.ndarray:
    """Level distribution in float64; entry k is P(level = k), entry 0 unused.

    Same forward recursion as :func:`pmf_dp`, vectorized over levels. The
    exact version carries denominators up to 2^(n^2/2), which is hopeless
    for n in the thousands; here high levels simply underflow to 0.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    p = np.zeros(n + 2)
    p[1] = 1.0
    up = np.ldexp(1.0, -np.arange(n + 2))
    up[0] = 0.0
    for _ in range(n):
        moved = p * up
        p = p - moved
        p[1:] += moved[:-1]
    return p


def float_moments(n: int) -> tuple:
    """(mean, variance) of the level after n increments, from :func:`pmf_float`."""
    p = pmf_float(n)
    k = np.arange(p.size)
    mu = float(k @ p)
    return mu, float(((k - mu) ** 2) @ p)


def pmf_closed(n: int, level: int) -> Fraction:
    """sum_{i<level} (-1)^i 2^-C(i,2) / (Q_i Q_{level-1-i}) (1 - 2^-(level-i))^n."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    total = Fraction(0)
    for i in range(level):
        coef = Fraction((-1) ** i, 1 << (i * (i - 1) // 2)) / (qpoch(i) * qpoch(level - 1 - i))
        total += coef * (1 - Fraction(1, 1 << (level - i))) ** n
    return total


def state_gf(level: int, order: int, q=HALF) -> Series:
    """H_level(z) = z^(level-1) q^C(level,2) / prod_{i=1..level} (1 - (1 - q^i) z)."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    q = Fraction(q)
    coeffs = [Fraction(0)] * (order + 1)
    if level - 1 <= order:
        coeffs[level - 1] = q ** (level * (level - 1) // 2)
    # dividing by (1 - a z) is the recurrence c_n += a c_{n-1}
    for i in range(1, level + 1):
        a = 1 - q**i
        for n in range(1, order + 1):
            if coeffs[n - 1]:
                coeffs[n] += a * coeffs[n - 1]
    return Series(coeffs)


def mean_rice(n: int) -> Fraction:
    """C_n = 1 - sum_{k=1..n} (-1)^k C(n,k) 2^-k Q_{k-1}, exactly.

    2^-k Q_{k-1} = P_{k-1} / 2^(k(k+1)/2) with P the integer products of
    (2^i - 1); the sum is accumulated over the common denominator.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    acc = mpz(0)
    p = mpz(1)  # P_{k-1}
    c = mpz(1)  # C(n, k)
    for k in range(1, n + 1):
        if k > 1:
            p = (p << (k - 1)) - p
        c = c * (n - k + 1) // k
        acc <<= k
        term = c * p
        acc += -term if k % 2 else term
    return 1 - dyadic(acc, n * (n + 1) // 2)


def pmf_mean(pmf: dict) -> Fraction:
    return sum((k * v for k, v in pmf.items()), Fraction(0))


def pmf_variance(pmf: dict) -> Fraction:
    mu = pmf_mean(pmf)
    return sum(((k - mu) ** 2 * v for k, v in pmf.items()), Fraction(0))


def bivariate_iteration(order_z: int, order_u: int, q=HALF) -> BiSeries:
    """Fixed point of F(z,u) = u/(1-z) + z(u-1)/(1-z) F(z, qu).

    Every application multiplies the previous iterate by z, so coefficients
    of z^n are final after n+1 rounds; iteration stops at the first
    unchanged iterate.
    """
    if order_z < 0 or order_u < 1:
        raise ValueError("need order_z >= 0 and order_u >= 1")
    q = Fraction(q)
    nz, nu = order_z, order_u
    base = [[Fraction(0)] * (nu + 1) for _ in range(nz + 1)]
    for i in range(nz + 1):
        base[i][1] = Fraction(1)  # u / (1 - z)
    F = [[Fraction(0)] * (nu + 1) for _ in range(nz + 1)]
    qpow = [q**j for j in range(nu + 1)]
    for _ in range(nz + 3):
        G = [[F[i][j] * qpow[j] for j in range(nu + 1)] for i in range(nz + 1)]
        # (u - 1) G, truncated in u
        H = [[(row[j - 1] if j else 0) - row[j] for j in range(nu + 1)] for row in G]
        # z / (1 - z) times H: shift then prefix sums in z
        new = [row[:] for row in base]
        running = [Fraction(0)] * (nu + 1)
        for i in range(1, nz + 1):
            src = H[i - 1]
            for j in range(nu + 1):
                running[j] += src[j]
                new[i][j] += running[j]
        if new == F:
            return BiSeries(F, nz, nu)
        F = new
    raise RuntimeError(f"bivariate iteration did not settle at orders ({order_z}, {order_u})")


def _simulate_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Levels after n increments for ``size`` independent counters, exact fair bits."""
    level = np.ones(size, dtype=np.int64)
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for _ in range(n):
        ok = np.ones(size, dtype=bool)
        need = level.copy()
        while True:
            active = need > 0
            if not active.any():
                break
            words = rng.bit_generator.random_raw(size)
            take = np.minimum(need, 64)
            shift = np.where(take >= 64, 0, take).astype(np.uint64)
            mask = np.where(take >= 64, full, (np.uint64(1) << shift) - np.uint64(1))
            ok &= ~active | ((words & mask) == 0)
            need = need - take
        level += ok
    return level


def simulate(n: int, trials: int, seed: int = 0, batch: int = 100_000) -> Counter:
    """Histogram {level: count} of ``trials`` counters after n increments.

    Trials are split into batches of ``batch``; batch b draws from the stream
    derived from (seed, b), so results do not depend on how batches are run.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")

    def work(b: int, size: int) -> Counter:
        levels = _simulate_batch(n, size, batch_generator(seed, b))
        vals, counts = np.unique(levels, return_counts=True)
        return Counter({int(v): int(c) for v, c in zip(vals, counts)})

    hist: Counter = Counter()
    for part in run_batches(work, batch_sizes(trials, batch)):
        hist.update(part)
    return Counter(dict(sorted(hist.items())))
