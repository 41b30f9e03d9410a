"""Register function (Horton-Strahler number) of binary trees.

Tree size counts internal nodes only.  Exact counts come from the
alternating binomial formula; the brute-force oracle enumerates every plane
binary tree of a given size.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .digits import v2
from .numerics import binomial, catalan, euler_gamma
from .series import Series

__all__ = [
    "Leaf",
    "Node",
    "LEAF",
    "reg",
    "enumerate_trees",
    "RegisterCensus",
    "brute_force_census",
    "register_series",
    "count_register",
    "register_census",
    "register_weighted_sum",
    "register_mean",
    "register_d0",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 14


class Leaf:
    __slots__ = ()
    size = 0

    def __repr__(self) -> str:
        return "Leaf"


LEAF = Leaf()


class Node:
    __slots__ = ("left", "right", "size")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.size = 1 + left.size + right.size

    def __repr__(self) -> str:
        return f"Node({self.left!r}, {self.right!r})"


def reg(t) -> int:
    """Register function: 0 at a leaf, max of children if they differ, else one more."""
    if isinstance(t, Leaf):
        return 0
    a, b = reg(t.left), reg(t.right)
    return a + 1 if a == b else max(a, b)


def enumerate_trees(n: int, limit: int = ENUMERATION_LIMIT) -> Iterator:
    """Yield every plane binary tree with n internal nodes exactly once.

    Order: left subtree size ascending, then recursively lexicographic.
    Subtrees are shared between yielded trees.
    """
    if n < 0:
        raise ValueError(f"tree size must be >= 0, got {n}")
    if n > limit:
        raise ValueError(f"tree size {n} exceeds enumeration limit {limit}")
    by_size: list = [[LEAF]]
    for m in range(1, n):
        by_size.append(
            [Node(l, r) for k in range(m) for l in by_size[k] for r in by_size[m - 1 - k]]
        )
    if n == 0:
        yield LEAF
        return
    for k in range(n):
        for l in by_size[k]:
            for r in by_size[n - 1 - k]:
                yield Node(l, r)


@dataclass
class RegisterCensus:
    n: int
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self):
        for p in sorted(self.counts):
            yield {"n": self.n, "p": p, "count": self.counts[p]}


def brute_force_census(n: int, limit: int = ENUMERATION_LIMIT) -> RegisterCensus:
    """Histogram of reg over all trees of size n (the enumeration oracle)."""
    memo: dict = {id(LEAF): 0}

    def r(t) -> int:
        key = id(t)
        if key in memo:
            return memo[key]
        a, b = r(t.left), r(t.right)
        v = a + 1 if a == b else max(a, b)
        memo[key] = v
        return v

    hist: Counter = Counter()
    for t in enumerate_trees(n, limit):
        # yielded roots are fresh objects; only their children are shared
        if isinstance(t, Leaf):
            hist[0] += 1
            continue
        a, b = r(t.left), r(t.right)
        hist[a + 1 if a == b else max(a, b)] += 1
    return RegisterCensus(n, dict(sorted(hist.items())))


def register_series(p: int, order: int) -> Series:
    """R_p(z) up to z^order from R_p = z R_{p-1}^2 / (1 - 2z sum_{j<p} R_j)."""
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    z = Series.variable(order)
    r = [Series.constant(1, order)]
    acc = r[0]
    for _ in range(p):
        nxt = z * r[-1] * r[-1] / (1 - 2 * z * acc)
        r.append(nxt)
        acc = acc + nxt
    return r[p]


def count_register(n: int, p: int) -> int:
    """Number of trees with n internal nodes and register value p (n, p >= 1).

    sum_k [C(2n, n+1-(2k+1)2^p) - 2 C(2n, n-(2k+1)2^p) + C(2n, n-1-(2k+1)2^p)],
    stopping once (2k+1) 2^p exceeds n+1 and every binomial vanishes.
    """
    if n < 1 or p < 1:
        raise ValueError(f"count_register needs n, p >= 1, got n={n}, p={p}")
    total = 0
    k = 0
    while True:
        m = (2 * k + 1) << p
        if m > n + 1:
            break
        total += binomial(2 * n, n + 1 - m) - 2 * binomial(2 * n, n - m) + binomial(2 * n, n - 1 - m)
        k += 1
    return total


def register_census(n: int) -> RegisterCensus:
    """Exact census from the closed form."""
    if n == 0:
        return RegisterCensus(0, {0: 1})
    counts = {}
    p = 1
    while (1 << p) <= n + 1:
        c = count_register(n, p)
        if c:
            counts[p] = c
        p += 1
    return RegisterCensus(n, counts)


def _binomial_row(m: int, upto: int) -> list:
    """[C(m, 0), ..., C(m, upto)] built incrementally."""
    row = [1]
    for j in range(min(upto, m)):
        row.append(row[-1] * (m - j) // (j + 1))
    return row + [0] * (upto - len(row) + 1)


def register_weighted_sum(n: int) -> int:
    """sum_p p * #(trees of size n with register p), via the trailing-zero sum."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    row = _binomial_row(2 * n, n)

    def c(j: int) -> int:
        return row[j] if 0 <= j <= n else 0

    total = 0
    for k in range(1, n + 2):
        w = v2(k)
        if w:
            total += w * (c(n + 1 - k) - 2 * c(n - k) + c(n - 1 - k))
    return total


def register_mean(n: int) -> Fraction:
    """Exact mean register value over the Catalan(n) trees of size n."""
    return Fraction(register_weighted_sum(n), catalan(n))


def register_d0(tol: float = 1e-12) -> float:
    """Mean term of the periodic fluctuation: 1/2 - gamma/(2 log 2) - 1/log 2 + log2(pi)."""
    g = euler_gamma(min(tol, 1e-15))
    ln2 = math.log(2)
    return 0.5 - g / (2 * ln2) - 1 / ln2 + math.log2(math.pi)
