"""Truncated power series with exact rational coefficients.

A :class:`Series` knows its truncation order: coefficients above it are
*unknown*, not zero, so binary operations return the smaller of the two
orders and indexing past the order raises.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["Series", "BiSeries", "series_arith"]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Series:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [_frac(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be >= 0")
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a series needs at least its constant term")
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "Series":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> "Series":
        """The series ``z`` truncated at ``order``."""
        return cls([0, 1], order)

    @classmethod
    def geometric(cls, ratio, order: int) -> "Series":
        """1 / (1 - ratio * z)."""
        r = _frac(ratio)
        return cls([r**n for n in range(order + 1)])

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.order:
            raise IndexError(f"coefficient z^{n} is beyond truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"Series([{terms}{more}], order={self.order})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return Series(self.coeffs[: order + 1])

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other) -> "Series":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def __sub__(self, other) -> "Series":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Series":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            c = _frac(other)
            return Series([c * a for a in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return Series(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Series":
        if not isinstance(other, Series):
            c = _frac(other)
            return Series([a / c for a in self.coeffs])
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Series":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int) -> "Series":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self) -> "Series":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("cannot invert a series with constant term 0")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.order + 1):
            s = sum((a[k] * out[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
            out.append(-s * inv0)
        return Series(out)

    def shift(self, k: int = 1) -> "Series":
        """Multiply by z^k, keeping the order."""
        return Series([Fraction(0)] * k + list(self.coeffs[: self.order + 1 - k]), self.order)

    def derivative(self) -> "Series":
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no known coefficients")
        return Series([i * self.coeffs[i] for i in range(1, self.order + 1)])

    def integral(self) -> "Series":
        return Series([Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def exp(self) -> "Series":
        a = self.coeffs
        if a[0] != 0:
            raise ValueError(f"exp needs constant term 0, got {a[0]}")
        out = [Fraction(1)]
        for n in range(1, self.order + 1):
            s = sum((k * a[k] * out[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
            out.append(s / n)
        return Series(out)

    def log(self) -> "Series":
        a = self.coeffs
        if a[0] != 1:
            raise ValueError(f"log needs constant term 1, got {a[0]}")
        out = [Fraction(0)]
        for n in range(1, self.order + 1):
            s = sum((k * out[k] * a[n - k] for k in range(1, n) if a[n - k]), Fraction(0))
            out.append(a[n] - s / n)
        return Series(out)

    def compose(self, inner: "Series") -> "Series":
        """self(inner(z)), by Horner's rule."""
        if inner.coeffs[0] != 0:
            raise ValueError(f"compose needs inner constant term 0, got {inner.coeffs[0]}")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        result = Series.constant(self.coeffs[n], n)
        for c in reversed(self.coeffs[:n]):
            result = result * inner + c
        return result

    def __call__(self, x):
        """Evaluate the known polynomial part at x."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def series_arith(a: Series, b: Series | None, op: str) -> Series:
    """Dispatch ``op`` in {add, mul, div, compose, exp, log} on truncated series."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if b.coeffs[0] == 0:
            raise ValueError(f"div needs divisor constant term != 0, got {b.coeffs[0]}")
        return a / b
    if op == "compose":
        return a.compose(b)
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError(f"unknown series operation {op!r}")


class BiSeries:
    """Bivariate truncated series, ``coeffs[i][j]`` = [x^i y^j]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Sequence], order1: int | None = None, order2: int | None = None):
        rows = [[_frac(c) for c in row] for row in coeffs]
        if order1 is None:
            order1 = len(rows) - 1
        if order2 is None:
            order2 = max((len(r) for r in rows), default=1) - 1
        if order1 < 0 or order2 < 0:
            raise ValueError("truncation orders must be >= 0")
        rows = rows[: order1 + 1]
        rows += [[] for _ in range(order1 + 1 - len(rows))]
        self.coeffs = tuple(
            tuple(r[: order2 + 1] + [Fraction(0)] * (order2 + 1 - len(r))) for r in rows
        )

    @classmethod
    def zero(cls, order1: int, order2: int) -> "BiSeries":
        return cls([], order1, order2)

    @classmethod
    def monomial(cls, c, i: int, j: int, order1: int, order2: int) -> "BiSeries":
        rows = [[0] * (order2 + 1) for _ in range(order1 + 1)]
        if i <= order1 and j <= order2:
            rows[i][j] = c
        return cls(rows, order1, order2)

    @property
    def order1(self) -> int:
        return len(self.coeffs) - 1

    @property
    def order2(self) -> int:
        return len(self.coeffs[0]) - 1

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if i < 0 or j < 0:
            return Fraction(0)
        if i > self.order1 or j > self.order2:
            raise IndexError(f"coefficient ({i},{j}) beyond truncation ({self.order1},{self.order2})")
        return self.coeffs[i][j]

    def __eq__(self, other) -> bool:
        if isinstance(other, BiSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"BiSeries(order1={self.order1}, order2={self.order2})"

    def _orders(self, other: "BiSeries"):
        return min(self.order1, other.order1), min(self.order2, other.order2)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        n1, n2 = self._orders(other)
        return BiSeries(
            [[self.coeffs[i][j] + other.coeffs[i][j] for j in range(n2 + 1)] for i in range(n1 + 1)]
        )

    def __neg__(self) -> "BiSeries":
        return BiSeries([[-c for c in row] for row in self.coeffs])

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def __mul__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            c = _frac(other)
            return BiSeries([[c * a for a in row] for row in self.coeffs])
        n1, n2 = self._orders(other)
        out = [[Fraction(0)] * (n2 + 1) for _ in range(n1 + 1)]
        nz = [(i, j, c) for i, row in enumerate(other.coeffs[: n1 + 1]) for j, c in enumerate(row[: n2 + 1]) if c]
        for i, row in enumerate(self.coeffs[: n1 + 1]):
            for j, a in enumerate(row[: n2 + 1]):
                if not a:
                    continue
                for k, l, b in nz:
                    if i + k <= n1 and j + l <= n2:
                        out[i + k][j + l] += a * b
        return BiSeries(out)

    __rmul__ = __mul__

    def shift(self, di: int, dj: int) -> "BiSeries":
        """Multiply by x^di y^dj, keeping both orders."""
        n1, n2 = self.order1, self.order2
        out = [[Fraction(0)] * (n2 + 1) for _ in range(n1 + 1)]
        for i in range(n1 + 1 - di):
            for j in range(n2 + 1 - dj):
                out[i + di][j + dj] = self.coeffs[i][j]
        return BiSeries(out)

    def scale(self, a=1, b=1) -> "BiSeries":
        """F(a x, b y)."""
        a, b = _frac(a), _frac(b)
        return BiSeries(
            [[c * a**i * b**j for j, c in enumerate(row)] for i, row in enumerate(self.coeffs)]
        )

    def at_second(self, value=1) -> Series:
        """F(x, value) as a series in x; only valid where the y-sum is finite."""
        v = _frac(value)
        return Series([sum((c * v**j for j, c in enumerate(row)), Fraction(0)) for row in self.coeffs])

    def mul_first(self, s: Series) -> "BiSeries":
        """Multiply by a univariate series in the first variable."""
        n1 = min(self.order1, s.order)
        out = []
        for i in range(n1 + 1):
            row = [Fraction(0)] * (self.order2 + 1)
            for k in range(i + 1):
                c = s.coeffs[i - k]
                if c:
                    src = self.coeffs[k]
                    for j in range(self.order2 + 1):
                        if src[j]:
                            row[j] += c * src[j]
            out.append(row)
        return BiSeries(out, n1, self.order2)

    def nonzero(self):
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    yield i, j, c
