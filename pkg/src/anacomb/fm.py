"""Probabilistic counting with a bitmap of geometric urns.

Each item lands in urn i with probability 2^-(i+1); R is the index of the
first empty urn.  q_exact(n, k) = P(R_n >= k) comes from the Thue-Morse
signed sum, q_oracle from brute-force enumeration of ball placements.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .numerics import mpz
from .rng import batch_generator, batch_sizes, run_batches

__all__ = [
    "UrnSketch",
    "geometric_draw",
    "nu",
    "tm_sign",
    "tm_signs",
    "q_exact",
    "q_table",
    "q_direct_sum",
    "q_oracle",
    "mean_R",
    "mean_R_exact",
    "psi_product",
    "psi_series",
    "dirichlet_N",
    "fm_product",
    "fm_constant_estimate",
    "simulate_fm",
]


class UrnSketch:
    """Bitmap of occupied urns 0..width-1.

    Serialized little-endian: urn i is bit (i mod 8) of byte i // 8.
    """

    __slots__ = ("width", "bits", "overflow")

    def __init__(self, width: int = 64, bits: int = 0, overflow: bool = False):
        if width < 1:
            raise ValueError("width must be >= 1")
        self.width = width
        self.bits = bits & ((1 << width) - 1)
        self.overflow = overflow

    def insert(self, g: int) -> "UrnSketch":
        if g < 0:
            raise ValueError(f"urn index must be >= 0, got {g}")
        if g >= self.width:
            g = self.width - 1
            self.overflow = True
        self.bits |= 1 << g
        return self

    def observe_R(self) -> int:
        """Index of the first empty urn (``width`` if all are full)."""
        free = ~self.bits & ((1 << self.width) - 1)
        if not free:
            return self.width
        return (free & -free).bit_length() - 1

    def merge(self, other: "UrnSketch") -> "UrnSketch":
        if other.width != self.width:
            raise ValueError("cannot merge sketches of different widths")
        return UrnSketch(self.width, self.bits | other.bits, self.overflow or other.overflow)

    def to_bytes(self) -> bytes:
        return self.bits.to_bytes((self.width + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, data: bytes, width: int | None = None) -> "UrnSketch":
        return cls(width or 8 * len(data), int.from_bytes(data, "little"))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UrnSketch):
            return NotImplemented
        return (self.width, self.bits, self.overflow) == (other.width, other.bits, other.overflow)

    def __repr__(self) -> str:
        return f"UrnSketch(width={self.width}, bits={self.bits:#x}, R={self.observe_R()})"


def geometric_draw(rng: random.Random) -> int:
    """Count fair-coin 0s before the first 1, so P(g = i) = 2^-(i+1)."""
    g = 0
    while rng.getrandbits(1) == 0:
        g += 1
    return g


def nu(j: int) -> int:
    if j < 0:
        raise ValueError(f"nu needs j >= 0, got {j}")
    return bin(j).count("1")


def tm_sign(j: int) -> int:
    """Thue-Morse sign (-1)^nu(j)."""
    return -1 if nu(j) & 1 else 1


def tm_signs(count: int) -> np.ndarray:
    """Signs for j = 0..count-1 as an int8 array."""
    j = np.arange(count, dtype=np.uint64)
    parity = np.zeros(count, dtype=np.uint8)
    while j.any():
        parity ^= (j & np.uint64(1)).astype(np.uint8)
        j >>= np.uint64(1)
    return (1 - 2 * parity.astype(np.int8)).astype(np.int8)


def q_direct_sum(n: int, k: int) -> Fraction:
    """The signed sum over j in [0, 2^k) term by term; cost 2^k powers."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    M = 1 << k
    total = sum(tm_sign(j) * (M - j) ** n for j in range(M))
    return Fraction(total, M**n)


def q_table(n: int, kmax: int) -> list:
    """[q_{n,0}, ..., q_{n,kmax}] from sum_{0<=j<2^k} (-1)^nu(j) (1 - j/2^k)^n.

    The Thue-Morse signs factor as prod_{t<k} (1 - S^(2^t)) with S the unit
    shift, so with x = j/2^k the sum is the polynomial (1-x)^n hit by the
    differences p(x) -> p(x) - p(x + 2^-t), t = 1..k, then read at x = 0.
    Working in y = 2^kmax x keeps every coefficient an integer.  Each
    difference drops the degree by one, so q_{n,k} = 0 for k > n.
    """
    if n < 0 or kmax < 0:
        raise ValueError("need n, kmax >= 0")
    K = kmax
    M = mpz(1) << K
    # coefficients of (M - y)^n in y, lowest degree first
    poly = [mpz(math.comb(n, i)) * (M ** (n - i)) * (-1) ** i for i in range(n + 1)]
    scale = K * n
    out = [Fraction(1)]
    for t in range(1, K + 1):
        if len(poly) <= 1:
            out.extend([Fraction(0)] * (K + 1 - len(out)))
            break
        h = mpz(1) << (K - t)
        poly = _difference(poly, h)
        out.append(_dyadic_q(poly[0], scale))
    return out


def _difference(poly: list, h) -> list:
    """Coefficients of p(y) - p(y + h); the top degree cancels."""
    d = len(poly) - 1
    shifted = list(poly)
    # Taylor shift by h via repeated synthetic division
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            shifted[j] += h * shifted[j + 1]
    diff = [a - b for a, b in zip(poly, shifted)]
    return diff[:d]


def _dyadic_q(num, scale: int) -> Fraction:
    from .numerics import dyadic

    return dyadic(num, scale)


def q_exact(n: int, k: int) -> Fraction:
    """P(urns 0..k-1 all occupied after n insertions)."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    if k > n:
        return Fraction(1) if k == 0 else Fraction(0)
    return q_table(n, k)[k]


ORACLE_MAX_N = 8
ORACLE_MAX_K = 4


def q_oracle(n: int, k: int) -> Fraction:
    """Brute force over all (k+1)^n placements into urns 0..k-1 or 'beyond'.

    Urn i has weight 2^-(i+1), the beyond bucket 2^-k.
    """
    if n > ORACLE_MAX_N or k > ORACLE_MAX_K:
        raise ValueError(f"q_oracle limited to n <= {ORACLE_MAX_N}, k <= {ORACLE_MAX_K}")
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    exps = [i + 1 for i in range(k)] + [k]
    want = (1 << k) - 1
    hits: Counter = Counter()
    for placement in itertools.product(range(k + 1), repeat=n):
        seen = 0
        e = 0
        for urn in placement:
            e += exps[urn]
            if urn < k:
                seen |= 1 << urn
        if seen == want:
            hits[e] += 1
    return sum((Fraction(c, 1 << e) for e, c in hits.items()), Fraction(0))


def mean_R_exact(n: int, extra: int = 40) -> Fraction:
    """sum_{k=1}^{ceil(log2 n)+extra} q_{n,k} in exact rationals (small n only)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    kmax = min(n, max(1, math.ceil(math.log2(n))) + extra)
    return sum(q_table(n, kmax)[1:], Fraction(0))


def mean_R(n: int, tol: float = 1e-12, exact_limit: int = 128) -> float:
    """Expected first-empty-urn index after n distinct insertions.

    For n <= exact_limit the exact rationals are summed and rounded.  Above
    that the alternating sum is out of reach (2^k terms, or O(n^2 k) big
    integers), so q_{., k} is propagated for every size m <= n through the
    positive recursion q_{m,k} = sum_{r<m} C(m,r) 2^-m q_{r,k-1} (r balls
    miss urn 0), which has no cancellation.  Binomial weights farther than
    6 sqrt(m) + 10 from m/2 are dropped; Hoeffding bounds their mass by
    2 exp(-72).  Summation stops once q_{n,k} < tol 2^-10 and k exceeds
    log2 n + 10 (beyond that q decays doubly exponentially).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n <= exact_limit:
        return float(mean_R_exact(n))
    m = np.arange(n + 1)
    width = np.ceil(6 * np.sqrt(m) + 10).astype(np.int64)
    span = 2 * int(width.max()) + 1
    offs = np.arange(span) - int(width.max())
    centre = m // 2
    r = centre[:, None] + offs[None, :]
    valid = (r >= 0) & (r < m[:, None])
    rc = np.clip(r, 0, n)
    logw = (
        gammaln(m[:, None] + 1.0)
        - gammaln(rc + 1.0)
        - gammaln(np.maximum(m[:, None] - rc, 0) + 1.0)
        - m[:, None] * math.log(2.0)
    )
    weights = np.where(valid, np.exp(np.where(valid, logw, -np.inf)), 0.0)
    q = np.ones(n + 1)
    total = 0.0
    floor_k = math.log2(n) + 10
    k = 0
    while True:
        k += 1
        q = (weights * q[rc]).sum(axis=1)
        total += q[n]
        if k > floor_k and q[n] < tol * 2.0**-10:
            break
        if k > n:
            break
    return total


def psi_product(x: float, tol: float = 1e-14) -> float:
    """prod_{j>=0} (1 - exp(-x 2^j)); stops once the next factor is within tol/2 of 1."""
    if x <= 0:
        raise ValueError("psi needs x > 0")
    acc = 1.0
    j = 0
    while True:
        e = math.exp(-x * 2.0**j)
        acc *= -math.expm1(-x * 2.0**j)
        j += 1
        # later factors differ from 1 by at most e^2 + e^4 + ... < 2 e^2 once e < 1/2
        if e < 0.5 and 2 * e * e < tol / 2:
            break
    return acc


def psi_series(x: float, tol: float = 1e-14) -> float:
    """sum_{j>=0} (-1)^nu(j) e^{-jx}; the tail after J terms is below e^{-Jx}/(1-e^{-x})."""
    if x <= 0:
        raise ValueError("psi needs x > 0")
    J = 1
    while math.exp(-J * x) / -math.expm1(-x) >= tol / 2:
        J += 1
    signs = tm_signs(J).astype(float)
    return math.fsum(signs * np.exp(-x * np.arange(J)))


def dirichlet_N(s: float, tol: float = 1e-10, method: str = "accelerated") -> float:
    """N(s) = sum_{j>=1} (-1)^nu(j) j^-s.

    ``direct`` (s > 1): Thue-Morse partial sums are bounded by 1 in absolute
    value, so by Abel summation the tail from J on is at most 2 J^-s.

    ``accelerated`` (s > 0): blocks 4j..4j+3 carry signs s(j)(+,-,-,+), so
    N(s) = -1 - 2^-s + 3^-s + sum_{j>=1} s(j) (4j)^-s B_j with
    B_j = 1 - (1+a)^-s - (1+2a)^-s + (1+3a)^-s, a = 1/(4j).  A second-order
    Taylor bound gives |B_j| <= 2 s (s+1) a^2, so the tail after J blocks is
    at most s / (8 4^s) J^-(s+1).
    """
    if s <= 0:
        raise ValueError(f"dirichlet_N needs s > 0, got {s}")
    if method == "direct":
        if s <= 1:
            raise ValueError("the direct sum converges only for s > 1")
        J = int(math.ceil((2.0 / (tol / 2)) ** (1.0 / s)))
        if J > 50_000_000:
            raise ValueError(f"direct sum would need {J} terms; use the accelerated form")
        return _signed_power_sum(J, s)
    if method != "accelerated":
        raise ValueError(f"unknown method {method!r}")
    J = int(math.ceil((s / (8 * 4.0**s) / (tol / 2)) ** (1.0 / (s + 1)))) + 1
    head = -1.0 - 2.0**-s + 3.0**-s
    total = head
    chunk = 1_000_000
    for start in range(1, J + 1, chunk):
        j = np.arange(start, min(start + chunk, J + 1), dtype=np.float64)
        a = 1.0 / (4 * j)
        # (1 + ka)^-s - 1 computed without cancellation
        d1 = np.expm1(-s * np.log1p(a))
        d2 = np.expm1(-s * np.log1p(2 * a))
        d3 = np.expm1(-s * np.log1p(3 * a))
        block = -d1 - d2 + d3
        signs = tm_signs_range(start, len(j)).astype(float)
        total += math.fsum(signs * (4 * j) ** -s * block)
    return total


def tm_signs_range(start: int, count: int) -> np.ndarray:
    j = np.arange(start, start + count, dtype=np.uint64)
    parity = np.zeros(count, dtype=np.uint8)
    while j.any():
        parity ^= (j & np.uint64(1)).astype(np.uint8)
        j >>= np.uint64(1)
    return (1 - 2 * parity.astype(np.int8)).astype(np.int8)


def _signed_power_sum(J: int, s: float) -> float:
    total = 0.0
    chunk = 1_000_000
    for start in range(1, J, chunk):
        count = min(chunk, J - start)
        j = np.arange(start, start + count, dtype=np.float64)
        total += math.fsum(tm_signs_range(start, count).astype(float) * j**-s)
    return total


def fm_product(terms: int) -> Fraction:
    """prod_{p=1..terms} [(4p+1)(4p+2) / ((4p)(4p+3))]^((-1)^nu(p))."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    acc = Fraction(1)
    for p in range(1, terms + 1):
        f = Fraction((4 * p + 1) * (4 * p + 2), (4 * p) * (4 * p + 3))
        acc *= f if tm_sign(p) == 1 else 1 / f
    return acc


def fm_constant_estimate(n: int, tol: float = 1e-12) -> float:
    """2^(mean_R(n) - log2 n), which settles as n grows."""
    return 2.0 ** (mean_R(n, tol) - math.log2(n))


def _sketch_batch(n: int, size: int, width: int, rng: np.random.Generator) -> np.ndarray:
    """R for ``size`` sketches fed n geometric draws built from fair bits."""
    bits = np.zeros(size, dtype=np.uint64)
    top = np.uint64(width - 1)
    for _ in range(n):
        g = np.zeros(size, dtype=np.uint64)
        pending = np.ones(size, dtype=bool)
        while pending.any():
            w = rng.bit_generator.random_raw(size)
            low = w & (~w + np.uint64(1))
            # frexp of a power of two 2^e returns exponent e + 1, exactly
            tz = (np.frexp(low.astype(np.float64))[1] - 1).astype(np.uint64)
            zero = w == 0
            g = np.where(pending, g + np.where(zero, np.uint64(64), tz), g)
            pending &= zero
        g = np.minimum(g, top)
        bits |= np.uint64(1) << g
    free = ~bits
    low = free & (~free + np.uint64(1))
    r = np.frexp(low.astype(np.float64))[1] - 1
    return np.where(free == 0, 64, r).astype(np.int64)


def simulate_fm(n: int, trials: int, seed: int = 0, width: int = 64, batch: int = 200_000) -> Counter:
    """Histogram {R: count} over ``trials`` independent sketches of n distinct items."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= width <= 64:
        raise ValueError("simulation supports widths 1..64")

    def work(b: int, size: int) -> Counter:
        r = _sketch_batch(n, size, width, batch_generator(seed, b))
        vals, counts = np.unique(r, return_counts=True)
        return Counter({int(v): int(c) for v, c in zip(vals, counts)})

    hist: Counter = Counter()
    for part in run_batches(work, batch_sizes(trials, batch)):
        hist.update(part)
    return Counter(dict(sorted(hist.items())))
