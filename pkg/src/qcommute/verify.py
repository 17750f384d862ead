"""The cross-check suite behind ``qcommute verify``.

Each check is a function of a :class:`Context` returning ``(checked, failures)``.
Checks look up the counting engines through their modules at call time, so a
patched engine is what gets verified.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable

from . import counting, ff, linalg, oracle, qfunc


@dataclass
class Context:
    level: str = "fast"
    seed: int = 0
    threads: int = 1

    @property
    def full(self) -> bool:
        return self.level == "full"


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    failures: list
    seconds: float

    def record(self, timings: bool = False) -> dict:
        rec = {
            "check": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": [str(f) for f in self.failures[:5]],
        }
        if timings:
            rec["wall_time"] = round(self.seconds, 3)
        return rec


Check = Callable[[Context], tuple[int, list]]
CHECKS: list[tuple[str, Check]] = []


def check(name: str):
    def deco(fn: Check) -> Check:
        CHECKS.append((name, fn))
        return fn
    return deco


def fields_upto(qs) -> list[ff.FieldSpec]:
    return [ff.field_for_q(q) for q in qs]


@check("field axioms")
def _field_axioms(ctx: Context):
    checked, bad = 0, []
    for F in fields_upto((2, 3, 4, 5, 7, 8, 9) if ctx.full else (2, 3, 4)):
        els = range(F.q)
        for a, b, c in product(els, repeat=3):
            checked += 1
            if F.mul(a, F.mul(b, c)) != F.mul(F.mul(a, b), c) or F.add(a, F.add(b, c)) != F.add(F.add(a, b), c):
                bad.append((F, a, b, c))
            if F.mul(a, F.add(b, c)) != F.add(F.mul(a, b), F.mul(a, c)):
                bad.append((F, a, b, c))
        for a in range(1, F.q):
            if F.mul(a, F.inv(a)) != 1:
                bad.append((F, "inv", a))
    return checked, bad


def pm_member_factored(g: ff.PolyFF, m: int) -> bool:
    """Search for (b, G) with g = t^b G(t^m)."""
    F = g.field
    d = len(g.coeffs) - 1
    for b in range(d + 1):
        if (d - b) % m:
            continue
        k = (d - b) // m
        for G in ff.monic_polys(F, k):
            big = [0] * (m * k + 1)
            for e, c in enumerate(G.coeffs):
                big[e * m] = c
            if ff.PolyFF(F, [0] * b + big) == g:
                return True
    return False


@check("P_m coefficient test vs factored form")
def _pm(ctx: Context):
    checked, bad = 0, []
    top = 6 if ctx.full else 4
    for F in fields_upto((2, 3)):
        for d in range(top + 1):
            for g in ff.monic_polys(F, d):
                for m in range(1, top + 2):
                    checked += 1
                    if ff.pm_member(g, m) != pm_member_factored(g, m):
                        bad.append((str(g), m))
    return checked, bad


@check("three-pipeline agreement")
def _pipelines(ctx: Context):
    checked, bad = 0, []
    qs = (2, 3, 4, 5) if ctx.full else (2, 3)
    nmax = 3 if ctx.full else 2
    for F in fields_upto(qs):
        for n in range(nmax + 1):
            tally = oracle.oracle_tally(F, n, workers=ctx.threads)
            for z in F.units():
                m = ff.mult_order(z)
                for s in ("K", "U", "N"):
                    checked += 1
                    o = tally[(s, z.code)]
                    c = counting.count(s, n, m, F.q)
                    e = qfunc.count_eval(s, m, n, F.q)
                    if not o == c == e:
                        bad.append((s, n, F.q, str(z), o, c, e))
    return checked, bad


@check("oracle vs naive double loop")
def _naive(ctx: Context):
    checked, bad = 0, []
    cases = [(F, 1) for F in fields_upto((2, 3, 4, 5, 7))] + [(ff.field_make(2), 2)]
    for F, n in cases:
        for z in F.units():
            for s in ("K", "U", "N"):
                checked += 1
                a = oracle.oracle_count(oracle.OracleJob(F, n, z, s))
                b = oracle.oracle_naive(s, n, F, z)
                if a != b:
                    bad.append((s, n, F.q, str(z), a, b))
    return checked, bad


@check("fitting decomposition criterion")
def _fitting(ctx: Context):
    checked, bad = 0, []
    for F in fields_upto((2, 3)):
        for n in (1, 2):
            for z in F.units():
                rep = oracle.verify_fitting(F, n, z)
                checked += rep.checked
                bad += rep.counterexamples
    return checked, bad


@check("similarity criterion and class count")
def _similarity(ctx: Context):
    checked, bad = 0, []
    cases = [(q, n) for q in (2, 3, 5) for n in (1, 2, 3)] if ctx.full else [(q, n) for q in (2, 3) for n in (1, 2)]
    for q, n in cases:
        F = ff.field_for_q(q)
        rep = oracle.verify_similarity_criterion(F, n, F.units())
        checked += rep.checked
        bad += rep.counterexamples
    if ctx.full:
        for q in (2, 3, 5):
            F = ff.field_for_q(q)
            for m in range(1, q):
                if (q - 1) % m:
                    continue
                for n in range(1, 5):
                    rep = oracle.verify_class_count(F, n, m)
                    checked += 1
                    bad += rep.counterexamples
    return checked, bad


@check("nilpotent block structure")
def _blocks(ctx: Context):
    checked, bad = 0, []
    for F in fields_upto((2, 3, 5) if ctx.full else (2, 3)):
        for n in range(1, (5 if ctx.full else 4)):
            for pi in counting.partitions(n):
                for z in F.units():
                    rep = oracle.verify_block_structure(pi, F, z)
                    checked += 1
                    bad += rep.counterexamples
    return checked, bad


@check("series identities")
def _series(ctx: Context):
    N = 12 if ctx.full else 8
    checked, bad = 0, []
    H = qfunc.factor_H(N)
    one_minus_x = qfunc.SeriesX(N, [1, -1])
    # H(x)(1 - x) = H(x/q)
    shifted = qfunc.SeriesX(N, [c * qfunc.RatQ.q_power(-a) for a, c in enumerate(H.coeffs)])
    checked += 1
    if H * one_minus_x != shifted:
        bad.append("H functional equation")
    for m in (1, 2, 3, 4, 6):
        Fm = qfunc.factor_F(m, N)
        lhs = Fm * one_minus_x * qfunc.SeriesX(N, [1] + [0] * (m - 1) + [qfunc.PolyQ([0, -1])])
        rhs = qfunc.SeriesX(N, [1] + [0] * (m - 1) + [-1]) * H
        checked += 1
        if lhs != rhs:
            bad.append(("F = G*H", m))
        K = qfunc.series_for("K", m, N)
        UN = qfunc.series_for("U", m, N) * qfunc.series_for("N", m, N)
        checked += 1
        if K != UN:
            bad.append(("K = U*N", m))
    return checked, bad


@check("polynomiality of counts")
def _poly(ctx: Context):
    checked, bad = 0, []
    nmax = 12 if ctx.full else 6
    for m in range(1, 7):
        for s in ("K", "U", "N"):
            for n in range(nmax + 1):
                checked += 1
                try:
                    p = qfunc.count_poly(s, m, n)
                except qfunc.IntegralityError as exc:
                    bad.append(str(exc))
                    continue
                if any(p(q) < 0 for q in range(2, 10)):
                    bad.append((s, m, n, str(p)))
    return checked, bad


@check("N-count independent of m")
def _n_indep(ctx: Context):
    checked, bad = 0, []
    for n in range(9):
        ref = qfunc.series_for("N", 1, 12)[n]
        for m in range(2, 7):
            checked += 1
            if qfunc.series_for("N", m, 12)[n] != ref:
                bad.append((n, m))
    return checked, bad


@check("fitting convolution from oracle counts")
def _conv(ctx: Context):
    checked, bad = 0, []
    for q in ((2, 3, 4, 5) if ctx.full else (2, 3)):
        F = ff.field_for_q(q)
        for z in F.units():
            rep = oracle.verify_fitting_convolution(F, z, 3 if ctx.full else 2, workers=ctx.threads)
            checked += rep.checked
            bad += rep.counterexamples
    return checked, bad


@check("conjugation invariance")
def _conj(ctx: Context):
    rng = random.Random(ctx.seed)
    checked, bad = 0, []
    for q, n in ((3, 3), (4, 2), (5, 3)):
        F = ff.field_for_q(q)
        for _ in range(20 if ctx.full else 5):
            A = linalg.MatrixFF.from_code(F, n, rng.randrange(q ** (n * n)))
            while True:
                P = linalg.MatrixFF.from_code(F, n, rng.randrange(q ** (n * n)))
                if linalg.is_nonsingular(P):
                    break
            C = P * A * P.inverse()
            checked += 1
            if linalg.invariant_factors(C) != linalg.invariant_factors(A):
                bad.append(("invariant factors", A))
            for z in F.units():
                if linalg.twisted_centralizer_dim(C, z) != linalg.twisted_centralizer_dim(A, z):
                    bad.append(("twisted centralizer", A, z.code))
    return checked, bad


@check("dependence only on ord(zeta)")
def _order(ctx: Context):
    checked, bad = 0, []
    if not ctx.full:
        cases = [(5, 2)]
    else:
        cases = [(5, 2), (7, 2), (4, 3)]
    for q, nmax in cases:
        F = ff.field_for_q(q)
        for n in range(nmax + 1):
            tally = oracle.oracle_tally(F, n, workers=ctx.threads)
            by_order: dict[int, set] = {}
            for z in F.units():
                by_order.setdefault(ff.mult_order(z), set()).add(tally[("K", z.code)])
            n_vals = {tally[("N", z.code)] for z in F.units()}
            checked += 1
            if any(len(v) != 1 for v in by_order.values()) or len(n_vals) != 1:
                bad.append((q, n))
    return checked, bad


def run(level: str = "fast", seed: int = 0, threads: int = 1) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}")
    qfunc.series_for.cache_clear()
    ctx = Context(level, seed, threads)
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            checked, failures = fn(ctx)
        except (ArithmeticError, ValueError, AssertionError) as exc:
            checked, failures = 0, [f"{type(exc).__name__}: {exc}"]
        out.append(CheckResult(name, not failures, checked, failures, time.perf_counter() - t0))
    qfunc.series_for.cache_clear()
    return out
