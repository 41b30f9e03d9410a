"""Binary digit functions, Gray code, the merge sum and Mellin-Perron checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .numerics import binomial

__all__ = [
    "v2",
    "s2",
    "delange_sum",
    "delange_F",
    "theta_sign",
    "gray_bits",
    "gray_value",
    "s_gray",
    "gray_telescope_check",
    "merge_sum",
    "DigitTable",
    "FiniteDirichlet",
    "perron_lhs",
    "perron_rhs_numeric",
    "perron_truncation_bound",
    "PerronResult",
    "PERRON_BATTERY",
]


def v2(k: int) -> int:
    """Number of trailing zero bits of k >= 1."""
    if k < 1:
        raise ValueError(f"v2 needs k >= 1, got {k}")
    return (k & -k).bit_length() - 1


def s2(n: int) -> int:
    """Binary digit sum."""
    if n < 0:
        raise ValueError(f"s2 needs n >= 0, got {n}")
    return bin(n).count("1")


def delange_sum(n: int) -> int:
    """sum_{m<n} S_2(m), exact."""
    if n < 1:
        raise ValueError(f"delange_sum needs n >= 1, got {n}")
    # bit b of m is set for floor(n / 2^(b+1)) full blocks plus a partial one
    total = 0
    b = 0
    while (1 << b) < n:
        block = 1 << (b + 1)
        total += (n // block) * (1 << b) + max(0, n % block - (1 << b))
        b += 1
    return total


def delange_F(n: int) -> float:
    """(sum_{m<n} S_2(m) - (n/2) log2 n) / n."""
    return (delange_sum(n) - n / 2 * math.log2(n)) / n


def theta_sign(k: int) -> int:
    """+1 if the odd part of k is 1 mod 4, -1 if it is 3 mod 4."""
    if k < 1:
        raise ValueError(f"theta_sign needs k >= 1, got {k}")
    odd = k >> v2(k)
    return 1 if odd & 3 == 1 else -1


def gray_bits(n: int) -> list:
    """Gray code digits a_0, a_1, ... of n from the floor formula.

    a_k = floor(n/2^(k+2) + 3/4) - floor(n/2^(k+2) + 1/4), done in integers.
    """
    if n < 0:
        raise ValueError(f"gray_bits needs n >= 0, got {n}")
    bits = []
    k = 0
    while (1 << k) <= n:
        d = 1 << (k + 2)
        bits.append((n + 3 * (1 << k)) // d - (n + (1 << k)) // d)
        k += 1
    return bits or [0]


def gray_value(n: int) -> int:
    return sum(b << k for k, b in enumerate(gray_bits(n)))


def s_gray(n: int) -> int:
    """Digit sum of the Gray code representation."""
    return sum(gray_bits(n))


def gray_telescope_check(N: int) -> dict:
    """Check S_GR(n) - S_GR(n-1) = theta(n) and S_GR(n) = sum_{m<=n} theta(m) for n <= N.

    Returns ``{"N": N, "ok": bool, "first_failure": n or None}``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    prev_bits = gray_bits(0)
    prev_s = 0
    running = 0
    for n in range(1, N + 1):
        bits = gray_bits(n)
        s = sum(bits)
        th = theta_sign(n)
        running += th
        width = max(len(bits), len(prev_bits))
        a = bits + [0] * (width - len(bits))
        b = prev_bits + [0] * (width - len(prev_bits))
        flips = sum(x != y for x, y in zip(a, b))
        if s - prev_s != th or s != running or flips != 1:
            return {"N": N, "ok": False, "first_failure": n}
        prev_bits, prev_s = bits, s
    return {"N": N, "ok": True, "first_failure": None}


def merge_sum(n: int) -> int:
    """sum_{k>=1} theta(k) C(2n, n-k)."""
    if n < 1:
        raise ValueError(f"merge_sum needs n >= 1, got {n}")
    return sum(theta_sign(k) * binomial(2 * n, n - k) for k in range(1, n + 1))


@dataclass
class DigitTable:
    """Tabulated v2, nu, S_2, theta, S_GR over 1..N."""

    N: int
    v2: list = field(default_factory=list)
    s2: list = field(default_factory=list)
    theta: list = field(default_factory=list)
    sgray: list = field(default_factory=list)

    @classmethod
    def build(cls, N: int) -> "DigitTable":
        t = cls(N)
        for n in range(1, N + 1):
            t.v2.append(v2(n))
            t.s2.append(s2(n))
            t.theta.append(theta_sign(n))
            t.sgray.append(s_gray(n))
        return t

    def rows(self):
        for i in range(self.N):
            yield {"n": i + 1, "v2": self.v2[i], "s2": self.s2[i], "theta": self.theta[i], "sgray": self.sgray[i]}


class FiniteDirichlet:
    """Finitely supported coefficients k -> lambda_k."""

    def __init__(self, support: Mapping[int, object] | None = None):
        sup = {}
        for k, lam in (support or {}).items():
            if k < 1:
                raise ValueError(f"Dirichlet index must be >= 1, got {k}")
            lam = Fraction(lam)
            if lam:
                sup[int(k)] = lam
        self.support = dict(sorted(sup.items()))

    def __repr__(self) -> str:
        return f"FiniteDirichlet({self.support})"

    def __call__(self, s):
        """sum_k lambda_k k^-s for complex s (numpy arrays accepted)."""
        s = np.asarray(s)
        out = np.zeros(s.shape, dtype=complex)
        for k, lam in self.support.items():
            out += float(lam) * np.exp(-s * math.log(k))
        return out


def perron_lhs(lam: FiniteDirichlet, n: int, m: int) -> Fraction:
    """(1/m!) sum_{1<=k<n} lambda_k (1 - k/n)^m, plus lambda_n/2 when m = 0."""
    if m not in (0, 1):
        raise ValueError(f"perron_lhs supports m in {{0, 1}}, got {m}")
    if n < 1:
        raise ValueError("n must be >= 1")
    total = sum(
        (c * (1 - Fraction(k, n)) ** m for k, c in lam.support.items() if k < n),
        Fraction(0),
    )
    if m == 0:
        total += lam.support.get(n, Fraction(0)) / 2
    return total


def perron_truncation_bound(lam: FiniteDirichlet, n: int, m: int, c: float, T: float) -> float:
    """Upper bound on |exact integral - integral over [c - iT, c + iT]|.

    With y = n/k, each term is y^s / (s...(s+m)).  For m = 0 the classical
    bound is y^c / (pi T |log y|) for y != 1 and c / (pi T) for y = 1.  For
    m = 1 one integration by parts gives y^c min(1/T, 2/(|log y| T^2)) / pi.
    """
    total = 0.0
    for k, coeff in lam.support.items():
        y = n / k
        L = math.log(y)
        a = abs(float(coeff)) * y**c
        if m == 0:
            total += a * (c / (math.pi * T) if k == n else 1.0 / (math.pi * T * abs(L)))
        else:
            b = 1.0 / T if k == n else min(1.0 / T, 2.0 / (abs(L) * T * T))
            total += a * b / math.pi
    return total


@dataclass
class PerronResult:
    value: float
    T: float
    truncation_bound: float
    panels: int


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def perron_rhs_numeric(
    lam: FiniteDirichlet,
    n: int,
    m: int,
    c: float = 1.0,
    T: float | None = None,
    tol: float = 1e-4,
) -> PerronResult:
    """(1/2 pi i) int_{c-iT}^{c+iT} Lambda(s) n^s ds / (s(s+1)...(s+m)), numerically.

    The integrand at c - it is the conjugate of that at c + it, so only
    t in [0, T] is sampled and twice the real part is kept.  Composite
    12-point Gauss-Legendre panels are sized to the fastest oscillation
    max |log(n/k)|.  If T is None the smallest T whose truncation bound is
    below tol/2 is used; if a given T cannot meet tol, ValueError names the
    T that would.
    """
    if m not in (0, 1):
        raise ValueError(f"perron_rhs_numeric supports m in {{0, 1}}, got {m}")
    if c <= 0:
        raise ValueError("c must be > 0")
    if not lam.support:
        return PerronResult(0.0, T or 0.0, 0.0, 0)
    needed = _solve_T(lam, n, m, c, tol / 2)
    if T is None:
        T = needed
    bound = perron_truncation_bound(lam, n, m, c, T)
    if bound > tol / 2:
        raise ValueError(
            f"truncation error bound {bound:.3g} exceeds tol/2 at T={T:g}; use T >= {needed:.6g}"
        )
    freq = max(abs(math.log(n / k)) for k in lam.support)
    width = min(1.0, c, math.pi / (2 * freq)) if freq > 0 else min(1.0, c)
    panels = int(math.ceil(T / width))
    coeffs = [(float(v), math.log(n / k)) for k, v in lam.support.items()]
    total = 0.0
    chunk = 20000
    edges = np.linspace(0.0, T, panels + 1)
    for start in range(0, panels, chunk):
        stop = min(start + chunk, panels)
        a = edges[start:stop]
        b = edges[start + 1 : stop + 1]
        half = (b - a)[:, None] / 2
        mid = (b + a)[:, None] / 2
        t = (mid + half * _GL_NODES[None, :]).ravel()
        w = (half * _GL_WEIGHTS[None, :]).ravel()
        s = c + 1j * t
        f = np.zeros_like(s)
        for coeff, L in coeffs:
            f += coeff * np.exp(s * L)
        den = s if m == 0 else s * (s + 1)
        total += float(np.sum(w * (f / den).real))
    # (1/2 pi i) ds = dt / (2 pi); conjugate symmetry doubles [0, T]
    return PerronResult(total / math.pi, T, bound, panels)


def _solve_T(lam: FiniteDirichlet, n: int, m: int, c: float, target: float) -> float:
    lo, hi = 1.0, 1.0
    while perron_truncation_bound(lam, n, m, c, hi) > target:
        hi *= 2
        if hi > 1e9:
            raise ValueError("no practical truncation height meets the tolerance")
    if hi == 1.0:
        return hi
    lo = hi / 2
    for _ in range(60):
        mid = (lo + hi) / 2
        if perron_truncation_bound(lam, n, m, c, mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


# (support, n, m) cases for the Perron check; n = k cases exercise the
# half-weight boundary term when m = 0.
PERRON_BATTERY = (
    ({1: 1}, 4, 1),
    ({2: 1}, 2, 1),
    ({1: 1, 2: -1, 3: 1}, 5, 1),
    ({1: Fraction(1, 2), 4: 3}, 9, 1),
    ({2: 1, 3: 1, 5: 1, 7: 1}, 10, 1),
    ({1: 1, 63: 1}, 64, 1),
    ({1: 1}, 2, 0),
    ({1: 1, 2: 1}, 2, 0),
    ({1: 1, 3: -1}, 6, 0),
    ({2: 1, 4: 1}, 4, 0),
    ({1: Fraction(1, 3), 5: 2}, 7, 0),
    ({1: 1, 63: 1}, 64, 0),
)
