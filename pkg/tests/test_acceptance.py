"""End-to-end acceptance checks. Each test prints one PASS/FAIL line."""

import pytest

from qcommute import counting, ff, oracle, qfunc, verify
from qcommute.qfunc import PolyQ, RatQ, SeriesX

pytestmark = pytest.mark.acceptance


def test_criterion_1_three_pipelines(criterion):
    checked, bad = 0, []
    for q in (2, 3, 4, 5):
        F = ff.field_for_q(q)
        for n in range(4):
            tally = oracle.oracle_tally(F, n, workers=4)
            for z in F.units():
                m = ff.mult_order(z)
                for s in ("K", "U", "N"):
                    checked += 1
                    o = tally[(s, z.code)]
                    c = counting.count(s, n, m, q)
                    e = qfunc.count_eval(s, m, n, q)
                    if not o == c == e:
                        bad.append((s, n, q, str(z), o, c, e))
    ok = criterion(1, "oracle = closed form = series, n<=3, q in {2,3,4,5}, all zeta",
                   not bad, f"{checked} cases, {len(bad)} mismatches")
    assert ok, bad[:5]


def test_criterion_2_anchor_values(criterion):
    F2, F3 = ff.field_for_q(2), ff.field_for_q(3)
    minus_one = F3.element(2)
    cases = [
        ("K", 2, F2, F2.one, 88),
        ("N", 2, F2, F2.one, 28),
        ("N", 2, F3, F3.one, 153),
        ("U", 2, F3, minus_one, 192),
        ("K", 2, F3, minus_one, 417),
    ]
    for q in (3, 4, 5, 7):
        F = ff.field_for_q(q)
        for z in F.units():
            if ff.mult_order(z) >= 2:
                cases.append(("K", 1, F, z, 2 * q - 1))
    bad = []
    for s, n, F, z, want in cases:
        naive = oracle.oracle_naive(s, n, F, z)
        fast = oracle.oracle_count(oracle.OracleJob(F, n, z, s))
        closed = counting.count(s, n, ff.mult_order(z), F.q)
        if not naive == fast == closed == want:
            bad.append((s, n, F.q, str(z), naive, fast, closed, want))
    ok = criterion(2, "anchor values, each confirmed by the naive double loop",
                   not bad, f"{len(cases)} values")
    assert ok, bad


def test_criterion_3_polynomials(criterion):
    q = PolyQ([0, 1])
    expected = {
        ("N", 1, 2): 2 * q**4 - q**2,
        ("K", 1, 2): q**6 + q**5 - q**3,
        ("K", 2, 2): q**5 + 3 * q**4 - 2 * q**3 - 2 * q**2 + q,
    }
    bad = [(k, str(qfunc.count_poly(*k))) for k, v in expected.items() if qfunc.count_poly(*k) != v]
    total = 0
    for m in range(1, 7):
        for s in ("K", "U", "N"):
            for n in range(13):
                total += 1
                try:
                    p = qfunc.count_poly(s, m, n)
                except qfunc.IntegralityError as exc:
                    bad.append(str(exc))
                    continue
                # coefficients can be negative (q^6 + q^5 - q^3); the counts cannot
                if any(p(v) < 0 for v in range(2, 33)):
                    bad.append((s, m, n, str(p)))
    ok = criterion(3, "polynomial anchors; integral, nonnegative-valued counts n<=12, m<=6",
                   not bad, f"{total} polynomials")
    assert ok, bad[:5]


def _geometric(ratio: RatQ | int, step: int, N: int) -> SeriesX:
    """1 / (1 - ratio * x^step)."""
    ratio = ratio if isinstance(ratio, RatQ) else RatQ(ratio)
    coeffs = [RatQ(0)] * (N + 1)
    term = RatQ(1)
    for e in range(0, N + 1, step):
        coeffs[e] = term
        term = term * ratio
    return SeriesX(N, coeffs)


def test_criterion_4_series_identities(criterion):
    N = 12
    bad = []
    for m in (1, 2, 3, 4, 6):
        K = qfunc.series_for("K", m, N)
        UN = qfunc.series_for("U", m, N) * qfunc.series_for("N", m, N)
        for n in range(N + 1):
            if K[n] != UN[n]:
                bad.append(("K = U*N", m, n))
        # F_m = (1 - x^m) / ((1 - x)(1 - q x^m)) * H, expanded independently
        one_minus_xm = SeriesX(N, [1] + [0] * (m - 1) + [-1])
        direct = one_minus_xm * _geometric(1, 1, N) * _geometric(RatQ(PolyQ([0, 1])), m, N) * qfunc.factor_H(N)
        if qfunc.factor_F(m, N) != direct:
            bad.append(("F = G*H", m))
    ok = criterion(4, "K = U*N coefficientwise and F_m = G_m*H to x^12", not bad)
    assert ok, bad


def test_criterion_5_fitting_exhaustive(criterion):
    checked, bad = 0, []
    for q in (2, 3):
        F = ff.field_for_q(q)
        for z in F.units():
            rep = oracle.verify_fitting(F, 2, z)
            checked += rep.checked
            bad += rep.counterexamples
    ok = criterion(5, "Fitting splitting of AB = zeta*BA, all pairs n=2, q in {2,3}",
                   not bad, f"{checked} pairs, {len(bad)} counterexamples")
    assert ok, bad[:5]


def test_criterion_6_similarity_and_classes(criterion):
    checked, bad = 0, []
    for q in (2, 3, 5):
        F = ff.field_for_q(q)
        for n in (1, 2, 3):
            rep = oracle.verify_similarity_criterion(F, n, F.units())
            checked += rep.checked
            bad += rep.counterexamples
        for m in range(1, q):
            if (q - 1) % m == 0:
                for n in range(1, 5):
                    rep = oracle.verify_class_count(F, n, m)
                    bad += rep.counterexamples
    ok = criterion(6, "B ~ zeta*B iff invariant factors in P_m; class counts n<=4",
                   not bad, f"{checked} (B, zeta) checks, {len(bad)} counterexamples")
    assert ok, bad[:5]


def test_criterion_7_order_invariance(criterion):
    bad = []
    for q, pair in ((5, (2, 3)), (7, (3, 5))):
        F = ff.field_for_q(q)
        for n in range(3):
            tally = oracle.oracle_tally(F, n)
            a, b = (F.element(c) for c in pair)
            assert ff.mult_order(a) == ff.mult_order(b)
            if tally[("K", a.code)] != tally[("K", b.code)]:
                bad.append(("K", q, n))
            if len({tally[("N", z.code)] for z in F.units()}) != 1:
                bad.append(("N", q, n))
    ok = criterion(7, "K depends only on ord(zeta); N independent of zeta", not bad)
    assert ok, bad


def test_criterion_8_determinism(criterion):
    runs = {}
    for threads in (1, 2, 8):
        results = verify.run("fast", seed=0, threads=threads)
        runs[threads] = [r.record(timings=False) for r in results]
    same = runs[1] == runs[2] == runs[8]
    all_pass = all(rec["passed"] for rec in runs[1])
    ok = criterion(8, "verify --level fast identical for 1, 2, 8 workers", same and all_pass,
                   f"{len(runs[1])} checks")
    assert ok
