"""Row formatting (CSV / JSON lines) and the oracle comparison record."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable

__all__ = ["OracleReport", "compare", "format_value", "render"]


def format_value(v, decimal_digits: int | None = None):
    """Fractions become "num/den" strings (or decimals); other scalars pass through."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator) if decimal_digits is None else _decimal(v, decimal_digits)
        if decimal_digits is None:
            return f"{v.numerator}/{v.denominator}"
        return _decimal(v, decimal_digits)
    if isinstance(v, float):
        return v
    if isinstance(v, int):
        return v
    if hasattr(v, "__int__") and type(v).__name__ == "mpz":
        return int(v)
    return v


def _decimal(v: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = max(digits, 1) + 20
        d = Decimal(v.numerator) / Decimal(v.denominator)
        return format(d.quantize(Decimal(1).scaleb(-digits)) if digits else d.to_integral_value(), "f")


@dataclass
class OracleReport:
    """One closed-form-versus-oracle comparison."""

    quantity: str
    params: dict = field(default_factory=dict)
    exact: object = None
    oracle: object = None
    tolerance: object = 0
    passed: bool = False

    def row(self, decimal_digits: int | None = None) -> dict:
        params = ";".join(f"{k}={format_value(v, decimal_digits)}" for k, v in self.params.items())
        return {
            "quantity": self.quantity,
            "params": params,
            "exact": _text(self.exact, decimal_digits),
            "oracle": _text(self.oracle, decimal_digits),
            "tolerance": _text(self.tolerance, decimal_digits),
            "pass": self.passed,
        }


def _text(v, decimal_digits):
    v = format_value(v, decimal_digits)
    return v if isinstance(v, str) else repr(v) if isinstance(v, float) else str(v)


def compare(quantity: str, exact, oracle, tolerance=0, **params) -> OracleReport:
    """pass iff exact == oracle (tolerance 0) or |exact - oracle| <= tolerance."""
    if tolerance == 0:
        ok = exact == oracle
    else:
        try:
            ok = abs(exact - oracle) <= tolerance
        except TypeError:
            ok = False
    return OracleReport(quantity, params, exact, oracle, tolerance, bool(ok))


def render(rows: Iterable[dict], fmt: str = "json", decimal_digits: int | None = None) -> str:
    rows = [{k: format_value(v, decimal_digits) for k, v in r.items()} for r in rows]
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in rows)
    if fmt == "csv":
        if not rows:
            return ""
        header: list = []
        for r in rows:
            header.extend(k for k in r if k not in header)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in header})
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
