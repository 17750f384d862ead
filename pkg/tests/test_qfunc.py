from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qcommute import counting, qfunc
from qcommute.qfunc import ONE, PolyQ, RatQ, SeriesX

q = PolyQ([0, 1])
polys = st.lists(st.integers(-5, 5), max_size=4).map(PolyQ)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
rats = st.builds(RatQ, polys, nonzero_polys)


# -- PolyQ / RatQ ---------------------------------------------------------------------

def test_polyq_format():
    assert str(2 * q**4 - q**2) == "2*q^4 - q^2"
    assert str(PolyQ([1])) == "1"
    assert str(PolyQ()) == "0"
    assert str(q - 1) == "q - 1"


def test_ratq_canonical_form():
    r = RatQ(q**2 - 1, q - 1)
    assert r.is_poly() and r.num == q + 1
    assert RatQ(PolyQ([-2, 2]), PolyQ([-4])) == RatQ(1 - q, 2)
    assert RatQ(2 - 2 * q, 4 - 4 * q) == RatQ(1, 2)
    assert str(RatQ(2 * q - 1, q - 1)) == "(2*q - 1) / (q - 1)"
    assert str(RatQ(q, q - 1)) == "q / (q - 1)"
    with pytest.raises(ZeroDivisionError):
        RatQ(q, 0)


def test_from_laurent():
    assert RatQ.from_laurent({0: 1, -1: -1}) == RatQ(q - 1, q)
    assert RatQ.q_power(-2) * RatQ.q_power(2) == ONE


@settings(max_examples=150, deadline=None)
@given(rats, rats, rats)
def test_ratq_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=100, deadline=None)
@given(rats, st.integers(2, 30))
def test_ratq_evaluation_is_a_homomorphism(a, v):
    b = RatQ(q + 3, q**2 + 1)
    if a.den(v) == 0:
        return
    assert (a * b)(v) == a(v) * b(v)
    assert (a + b)(v) == a(v) + b(v)
    assert isinstance(a(v), Fraction)


@settings(max_examples=100, deadline=None)
@given(polys, st.integers(2, 4))
def test_polyq_divmod_by_monic(f, k):
    g = q**k + PolyQ([3, -1])
    quo, rem = divmod(f, g)
    assert quo * g + rem == f
    assert rem.degree < g.degree


# -- factors ------------------------------------------------------------------------

def test_gl_order_poly():
    assert qfunc.gl_order_poly(0) == PolyQ([1])
    assert qfunc.gl_order_poly(1) == q - 1
    assert qfunc.gl_order_poly(2) == q**4 - q**3 - q**2 + q
    for n in range(5):
        for v in (2, 3, 7):
            assert qfunc.gl_order_poly(n)(v) == counting.gl_order(n, v)


def test_factor_G_examples():
    assert list(qfunc.factor_G(1, 2).coeffs) == [ONE, RatQ(q), RatQ(q**2)]
    assert list(qfunc.factor_G(2, 3).coeffs) == [ONE, ONE, RatQ(q), RatQ(q)]
    for m in range(1, 7):
        assert qfunc.factor_G(m, 5)[0] == ONE


def test_factor_G_closed_form():
    # (1 - x)(1 - q x^m) G_m = 1 - x^m
    N = 10
    for m in range(1, 6):
        lhs = SeriesX(N, [1, -1]) * SeriesX(N, [1] + [0] * (m - 1) + [-q]) * qfunc.factor_G(m, N)
        assert lhs == SeriesX(N, [1] + [0] * (m - 1) + [-1])


def test_factor_H_examples():
    H = qfunc.factor_H(3)
    assert H[0] == ONE
    assert H[1] == RatQ(q, q - 1)
    assert H[2] == RatQ(q**3, (q - 1) * (q**2 - 1))


def test_h_functional_equation():
    N = 10
    H = qfunc.factor_H(N)
    shifted = SeriesX(N, [c * RatQ.q_power(-a) for a, c in enumerate(H.coeffs)])
    assert H * SeriesX(N, [1, -1]) == shifted


def test_h_coefficients_closed_form():
    # 1/f(a) = q^(a(a+1)/2) / prod_{j<=a} (q^j - 1)
    for a, c in enumerate(qfunc.factor_H(8).coeffs):
        den = PolyQ([1])
        for j in range(1, a + 1):
            den = den * (q**j - 1)
        assert c == RatQ(q ** (a * (a + 1) // 2), den)


# -- series product ---------------------------------------------------------------

def test_series_product_examples():
    assert qfunc.series_product(lambda i: SeriesX.one(4), 4) == SeriesX.one(4)
    f = qfunc.series_product(lambda i: SeriesX(2, [1, 1]) if i == 1 else SeriesX.one(2), 2)
    assert f == SeriesX(2, [1, 1])
    G = qfunc.series_product(lambda i: qfunc.factor_G(2, 1).substitute_power(i, 1), 1)
    assert G[1] == ONE


def test_series_product_rejects_bad_constant_term():
    with pytest.raises(ValueError):
        qfunc.series_product(lambda i: SeriesX(3, [2, 1]), 3)


def test_truncation_is_enforced():
    S = qfunc.series_for("K", 2, 4)
    with pytest.raises(qfunc.TruncationError):
        S[5]


def test_series_for_examples():
    for which in ("K", "U", "N"):
        assert qfunc.series_for(which, 2, 3)[0] == ONE
    for m in (2, 3, 4):
        assert qfunc.series_for("K", m, 3)[1] == RatQ(2 * q - 1, q - 1)
    assert qfunc.series_for("K", 1, 3)[1] == RatQ(q**2, q - 1)


def test_truncation_order_does_not_change_coefficients():
    small = qfunc.series_for("K", 3, 6)
    big = qfunc.series_for("K", 3, 10)
    assert all(small[n] == big[n] for n in range(7))


@pytest.mark.parametrize("m", (1, 2, 3, 4, 6))
def test_k_equals_u_times_n(m):
    N = 12
    assert qfunc.series_for("K", m, N) == qfunc.series_for("U", m, N) * qfunc.series_for("N", m, N)


# -- count polynomials ------------------------------------------------------------

def test_count_poly_examples():
    assert qfunc.count_poly("N", 1, 2) == 2 * q**4 - q**2
    assert qfunc.count_poly("K", 1, 2) == q**6 + q**5 - q**3
    assert qfunc.count_poly("K", 2, 2) == q**5 + 3 * q**4 - 2 * q**3 - 2 * q**2 + q
    assert str(qfunc.count_poly("U", 3, 0)) == "1"


def test_count_eval_examples():
    assert qfunc.count_eval("K", 1, 2, 2) == 88
    assert qfunc.count_eval("U", 2, 2, 3) == 192
    for v in (2, 3, 4, 5):
        for m in (1, 2, 3):
            assert qfunc.count_eval("N", m, 1, v) == v
    with pytest.raises(ValueError):
        qfunc.count_eval("K", 1, 2, 1)


def test_n_polynomial_independent_of_m():
    for n in range(9):
        ref = qfunc.count_poly("N", 1, n)
        assert all(qfunc.count_poly("N", m, n) == ref for m in range(2, 7))


@pytest.mark.parametrize("which", ("K", "U", "N"))
@pytest.mark.parametrize("m", (1, 2, 3, 4, 6))
def test_polynomials_agree_with_closed_form(which, m):
    for n in range(8):
        p = qfunc.count_poly(which, m, n)
        for v in (2, 3, 4, 5, 7, 8, 9, 13):
            if (v - 1) % m == 0:
                assert p(v) == counting.count(which, n, m, v), (which, m, n, v)


@pytest.mark.parametrize("n", (1, 2, 3, 4))
def test_commuting_count_has_degree_n2_plus_n(n):
    # interpolate the closed form through n^2 + n + 2 integer points (all m=1-valid)
    deg = n * n + n
    pts = list(range(2, deg + 4))
    x = sympy.symbols("q")
    interp = sympy.Poly(sympy.interpolate([(v, counting.count_K(n, 1, v)) for v in pts], x), x)
    assert interp.degree() == deg
    assert interp.all_coeffs()[::-1] == list(qfunc.count_poly("K", 1, n).coeffs)


def test_integrality_error_is_raised_for_a_broken_engine(monkeypatch):
    monkeypatch.setattr(qfunc, "factor_G", lambda m, N: SeriesX(N, [ONE] + [RatQ(1, q + 2)] * N))
    qfunc.series_for.cache_clear()
    try:
        with pytest.raises(qfunc.IntegralityError):
            qfunc.count_poly("U", 2, 2)
    finally:
        qfunc.series_for.cache_clear()
