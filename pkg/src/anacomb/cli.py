"""Command-line entry point: tables per module and a ``verify`` mode.

Exit status: 0 success, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import digits, dst, fm, morris, register, slices, sums
from .report import OracleReport, compare, render

SUITES = ("register", "counter", "fm", "dst", "slices", "sums", "digits", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--decimal", type=int, metavar="DIGITS", help="print rationals as decimals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anacomb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("register", help="register-function census or mean")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--mean", action="store_true")
    _common(p)

    p = sub.add_parser("morris", help="approximate counter level distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--mean", action="store_true")
    _common(p)

    p = sub.add_parser("fm", help="probabilistic counting: q table, mean, simulation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, help="largest k in the q table")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--mean", action="store_true")
    _common(p)

    p = sub.add_parser("dst", help="digital search tree endnodes")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--mean", action="store_true")
    _common(p)

    p = sub.add_parser("slices", help="level number sequences")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--growth", action="store_true", help="pole, amplitude and rate at n")
    _common(p)

    p = sub.add_parser("sums", help="alternating binomial sums and Euler sums")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    _common(p)

    p = sub.add_parser("ramanujan", help="Q(n), R(n) and the k of Ramanujan's bound")
    p.add_argument("--n", type=int, required=True)
    _common(p)

    p = sub.add_parser("digits", help="digit-function table or Perron battery")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, choices=(0, 1), help="run the Perron battery cases for this m")
    _common(p)

    p = sub.add_parser("verify", help="closed forms against oracles")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--trials", type=int, default=20_000)
    _common(p)
    return parser


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


# ---- table commands ---------------------------------------------------------


def cmd_register(a) -> list:
    _need(a.n >= 0, "--n must be >= 0")
    if a.mean:
        _need(a.n >= 1, "--mean needs --n >= 1")
        return [{"n": a.n, "mean": register.register_mean(a.n)}]
    if a.p is not None:
        _need(a.n >= 1 and a.p >= 1, "--n and --p must be >= 1")
        return [{"n": a.n, "p": a.p, "count": register.count_register(a.n, a.p)}]
    return list(register.register_census(a.n).rows())


def cmd_morris(a) -> list:
    _need(a.n >= 0, "--n must be >= 0")
    if a.trials:
        _need(a.trials >= 1, "--trials must be >= 1")
        hist = morris.simulate(a.n, a.trials, a.seed)
        return [{"n": a.n, "level": k, "count": c} for k, c in hist.items()]
    if a.mean:
        return [{"n": a.n, "mean": morris.mean_rice(a.n)}]
    return [{"n": a.n, "level": k, "probability": p} for k, p in morris.pmf_dp(a.n).items()]


def cmd_fm(a) -> list:
    _need(a.n >= 0, "--n must be >= 0")
    if a.mean:
        _need(a.n >= 1, "--mean needs --n >= 1")
        return [{"n": a.n, "mean": fm.mean_R(a.n, a.tol)}]
    if a.trials:
        _need(a.trials >= 1, "--trials must be >= 1")
        hist = fm.simulate_fm(a.n, a.trials, a.seed)
        return [{"n": a.n, "R": k, "count": c} for k, c in hist.items()]
    kmax = a.order if a.order is not None else min(a.n, max(1, math.ceil(math.log2(max(a.n, 2)))) + 4)
    _need(kmax >= 0, "--order must be >= 0")
    return [{"n": a.n, "k": k, "probability": q} for k, q in enumerate(fm.q_table(a.n, kmax))]


def cmd_dst(a) -> list:
    if a.n is None:
        return [dst.dst_constant(a.tol)]
    _need(a.n >= 0, "--n must be >= 0")
    if a.trials:
        return [dst.simulate_dst(a.n, a.trials, a.seed)]
    if a.mean:
        return [{"n": a.n, "mean": dst.ell_recurrence(a.n)}]
    _need(a.n <= dst.ENDNODE_CAP, f"--n must be <= {dst.ENDNODE_CAP} for the distribution")
    return list(dst.endnode_poly(a.n).rows())


def cmd_slices(a) -> list:
    _need(a.n >= 1, "--n must be >= 1")
    if a.growth:
        _need(a.n >= 2, "--growth needs --n >= 2")
        amp, rate = slices.growth_fit(a.n)
        return [{"n": a.n, "pole": slices.dominant_pole(), "amplitude": amp, "rate": rate}]
    return [{"n": n, "H": slices.count_dp(n)} for n in range(1, a.n + 1)]


def cmd_sums(a) -> list:
    if a.p is not None or a.q is not None:
        _need(a.p is not None and a.q is not None, "Euler sums need both --p and --q")
        _need(a.p >= 1 and a.q >= 2, "need --p >= 1 and --q >= 2")
        e = sums.euler_sum(a.p, a.q, max(a.tol, 1e-10))
        return [{"p": e.p, "q": e.q, "value": e.value, "lower": e.lower, "upper": e.upper}]
    _need(a.n is not None and a.n >= 1 and a.m >= 1, "need --n >= 1 and --m >= 1")
    return [
        {"n": a.n, "m": m, "sum": sums.alt_binom_sum(a.n, m), "extracted": sums.harmonic_exp_extract(a.n, m)}
        for m in range(1, a.m + 1)
    ]


def cmd_ramanujan(a) -> list:
    _need(a.n >= 1, "--n must be >= 1")
    t = sums.theta_k(a.n)
    return [{"n": a.n, "Q": sums.ramanujan_Q(a.n), "R": sums.ramanujan_R(a.n), **{k: t[k] for k in ("D", "theta", "k")}}]


def cmd_digits(a) -> list:
    if a.m is not None:
        rows = []
        for i, (sup, n, m) in enumerate(digits.PERRON_BATTERY):
            if m != a.m:
                continue
            lam = digits.FiniteDirichlet(sup)
            r = digits.perron_rhs_numeric(lam, n, m)
            lhs = digits.perron_lhs(lam, n, m)
            rows.append({"case": i, "n": n, "m": m, "lhs": lhs, "rhs": r.value, "T": r.T, "err": abs(r.value - float(lhs))})
        return rows
    _need(a.n is not None and a.n >= 1, "--n must be >= 1")
    return list(digits.DigitTable.build(a.n).rows())


# ---- verification -----------------------------------------------------------


def _mc(quantity: str, hits: int, trials: int, p: Fraction, **params) -> OracleReport:
    """Empirical frequency against an exact probability at 5 sigma."""
    pf = float(p)
    sigma = math.sqrt(max(pf * (1 - pf), 1e-300) / trials)
    return compare(quantity, Fraction(hits, trials), p, Fraction(5 * sigma).limit_denominator(10**12), trials=trials, **params)


def verify_register(a) -> list:
    out = []
    for n in range(0, 11):
        out.append(compare("register census vs enumeration", register.register_census(n).counts, register.brute_force_census(n).counts, n=n))
    for n in range(1, 16):
        c = register.register_census(n)
        out.append(compare("register census total = Catalan", c.total(), register.catalan(n), n=n))
        ser = register.register_series
        out.append(compare("register counts vs series", {p: ser(p, n)[n] for p in c.counts}, {p: Fraction(v) for p, v in c.counts.items()}, n=n))
    d0 = register.register_d0()
    for n in (256, 1024):
        m = float(register.register_mean(n))
        out.append(compare("register mean - log4 n", m - math.log(n, 4), d0, 0.05, n=n))
    return out


def verify_counter(a) -> list:
    out = []
    N = 24
    biv = morris.bivariate_iteration(N, N + 2)
    pmfs = [morris.pmf_dp(n) for n in range(N + 1)]
    for n in range(N + 1):
        pmf = pmfs[n]
        closed = {k: morris.pmf_closed(n, k) for k in pmf}
        out.append(compare("counter pmf dp vs closed form", pmf, closed, n=n))
        out.append(compare("counter pmf dp vs bivariate", pmf, {k: biv[n, k] for k in pmf}, n=n))
        out.append(compare("counter mean Rice vs pmf", morris.mean_rice(n), morris.pmf_mean(pmf), n=n))
    for level in range(1, 8):
        gf = morris.state_gf(level, N)
        out.append(compare("counter state gf vs dp", [gf[n] for n in range(N + 1)], [pmfs[n].get(level, Fraction(0)) for n in range(N + 1)], level=level))
    for n in (256,):
        d = morris.mean_rice(2 * n) - morris.mean_rice(n)
        out.append(compare("counter mean doubling", float(d), 1.0, 0.02, n=n))
    n = 100
    hist = morris.simulate(n, a.trials, a.seed)
    pmf = morris.pmf_dp(n)
    mu = float(morris.pmf_mean(pmf))
    emp = sum(k * c for k, c in hist.items()) / a.trials
    var = float(morris.pmf_variance(pmf))
    out.append(compare("counter simulated mean (5 sigma)", emp, mu, 5 * math.sqrt(var / a.trials), n=n, trials=a.trials))
    return out


def verify_fm(a) -> list:
    out = []
    for n in range(0, 7):
        for k in range(0, 5):
            out.append(compare("fm q formula vs enumeration", fm.q_exact(n, k), fm.q_oracle(n, k), n=n, k=k))
    for n in range(1, 33):
        row = fm.q_table(n, 12)
        out.append(compare("fm q nonincreasing in k", all(x >= y for x, y in zip(row, row[1:])), True, n=n))
        out.append(compare("fm q vs direct signed sum", row[:6], [fm.q_direct_sum(n, k) for k in range(6)], n=n))
        out.append(compare("fm j = 2^k term vanishes", (1 - Fraction(1)) ** n, Fraction(0), n=n))
    for x in (0.5, 1.0, 2.0, 5.0):
        out.append(compare("fm psi product vs series", fm.psi_product(x, 1e-12), fm.psi_series(x, 1e-12), 2e-12, x=x))
    out.append(compare("fm N(2) direct vs accelerated", fm.dirichlet_N(2, 1e-8, "direct"), fm.dirichlet_N(2, 1e-8), 2e-8, s=2))
    out.append(compare("fm mean_R exact vs recursion", fm.mean_R(128), fm.mean_R(128, exact_limit=0), 1e-10, n=128))
    d = fm.mean_R(1024) - fm.mean_R(512)
    out.append(compare("fm mean doubling", d, 1.0, 0.02, n=512))
    n = 8
    hist = fm.simulate_fm(n, a.trials, a.seed)
    hits = sum(c for r, c in hist.items() if r >= 2)
    out.append(_mc("fm simulated P(R >= 2)", hits, a.trials, fm.q_exact(n, 2), n=n, k=2))
    return out


def verify_dst(a) -> list:
    out = []
    t = dst.DSTree()
    for key in ("1001", "0110", "0000", "1111", "0100", "0101", "1101", "1110", "1100"):
        t.insert(key)
    out.append(compare("dst endnodes of nine-key example", t.count_endnodes(), 4))
    for n in range(2, 41):
        ell = dst.ell_recurrence(n)
        out.append(compare("dst l_n recurrence vs closed", ell, dst.ell_closed(n), n=n))
        out.append(compare("dst l_n recurrence vs Poisson", ell, dst.ell_from_hat(n), n=n))
        out.append(compare("dst Poisson iteration vs closed", dst.ell_hat(n), dst.ell_hat_closed(n), n=n))
    for n in range(0, 21):
        F = dst.endnode_poly(n)
        out.append(compare("dst F_n'(1) = l_n", F.mean(), dst.ell_recurrence(n), n=n))
        out.append(compare("dst F_n(1) = 1", F.total(), Fraction(1), n=n))
    for z in (-1, -0.5, 0, 1, 5):
        out.append(compare("dst R* series vs partial fractions", dst.r_star(z, 1e-12), dst.r_star_partial_fractions(z, 1e-12), 2e-12, z=z))
    for row in dst.euler_identity_checks(1e-12):
        out.append(compare(row["identity"], row["lhs"], row["rhs"], row["tol"]))
    c = dst.dst_constant()["constant"]
    out.append(compare("dst l_n / n at n=1024", float(dst.ell_closed(1024)) / 1024, c, 1e-3, n=1024))
    return out


def verify_slices(a) -> list:
    out = []
    gf = slices.gf_closed(40)
    counts = slices.slice_counts(40)
    for n in range(1, 41):
        h = slices.count_dp(n)
        out.append(compare("slices closed form vs dp", gf[n], Fraction(h), n=n))
        out.append(compare("slices iteration vs dp", counts[n], h, n=n))
    rho = slices.dominant_pole()
    amp, rate = slices.growth_fit(60)
    out.append(compare("slices 1/pole vs H_60/H_59", 1 / rho, rate, 1e-4, n=60))
    return out


def verify_sums(a) -> list:
    out = []
    for n in range(1, 21):
        ev = sums.harmonic_evaluations(n)
        for m in range(1, 5):
            s = sums.alt_binom_sum(n, m)
            out.append(compare("alternating sum vs exp-harmonic", s, sums.harmonic_exp_extract(n, m), n=n, m=m))
            if m in ev:
                out.append(compare("alternating sum vs harmonic form", s, ev[m], n=n, m=m))
    targets = sums.euler_sum_targets()
    for (p, q), v in targets.items():
        out.append(compare("Euler sum vs zeta values", sums.euler_sum(p, q).value, v, 1e-6, p=p, q=q))
    for n in range(1, 51, 7):
        lhs = float(sums.ramanujan_Q(n)) + sums.ramanujan_R(n)
        rhs = math.exp(math.lgamma(n + 1) + n - n * math.log(n))
        out.append(compare("Q(n) + R(n) = n! e^n / n^n (relative)", lhs / rhs, 1.0, 1e-10, n=n))
    for n in (1, 10, 50, 200):
        out.append(compare("k(n) inside (2/21, 8/45)", sums.theta_k(n)["inside"], True, n=n))
    y = sums.tree_function(12)
    out.append(compare("tree function coefficients", list(y.coeffs[1:]), [Fraction(n ** (n - 1), math.factorial(n)) for n in range(1, 13)]))
    for s in (0.25, 0.5):
        r = sums.master_theorem_check(s, 1e-6)
        out.append(compare("master theorem", r["lhs"], r["rhs"], 1e-6, s=s))
    return out


def verify_digits(a) -> list:
    out = []
    N = 20_000
    tele = digits.gray_telescope_check(N)
    out.append(compare("Gray telescoping and adjacency", tele["ok"], True, N=N))
    ok = all(digits.s2(n) - digits.s2(n - 1) == 1 - digits.v2(n) for n in range(1, N + 1))
    out.append(compare("S2 difference = 1 - v2", ok, True, N=N))
    ok = all(digits.gray_value(n) == n ^ (n >> 1) for n in range(N + 1))
    out.append(compare("Gray floor formula vs n xor n/2", ok, True, N=N))
    out.append(compare("nu vs S2", all(fm.nu(n) == digits.s2(n) for n in range(N + 1)), True, N=N))
    for i, (sup, n, m) in enumerate(digits.PERRON_BATTERY):
        if n > 32:
            continue
        lam = digits.FiniteDirichlet(sup)
        r = digits.perron_rhs_numeric(lam, n, m, tol=1e-4)
        out.append(compare("Mellin-Perron", r.value, float(digits.perron_lhs(lam, n, m)), 1e-4, case=i, n=n, m=m))
    return out


VERIFIERS = {
    "register": verify_register,
    "counter": verify_counter,
    "fm": verify_fm,
    "dst": verify_dst,
    "slices": verify_slices,
    "sums": verify_sums,
    "digits": verify_digits,
}

COMMANDS = {
    "register": cmd_register,
    "morris": cmd_morris,
    "fm": cmd_fm,
    "dst": cmd_dst,
    "slices": cmd_slices,
    "sums": cmd_sums,
    "ramanujan": cmd_ramanujan,
    "digits": cmd_digits,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.decimal is not None:
            _need(a.decimal >= 0, "--decimal must be >= 0")
        _need(a.tol > 0, "--tol must be positive")
        if a.command == "verify":
            _need(a.trials >= 1, "--trials must be >= 1")
            names = list(VERIFIERS) if a.suite == "all" else [a.suite]
            reports = [r for name in names for r in VERIFIERS[name](a)]
            stdout.write(render((r.row(a.decimal) for r in reports), a.format, a.decimal))
            return 0 if all(r.passed for r in reports) else 1
        rows = COMMANDS[a.command](a)
    except UsageError as e:
        msg = str(e)
        if not msg.startswith(parser.prog):
            parser.print_usage(sys.stderr)
            msg = f"{parser.prog}: error: {msg}"
        print(msg, file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"anacomb: error: {e}", file=sys.stderr)
        return 2
    stdout.write(render(rows, a.format, a.decimal))
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
