import random

import pytest
from hypothesis import given, settings, strategies as st

from qcommute import ff, linalg
from qcommute.ff import PolyFF
from qcommute.linalg import MatrixFF

F2, F3, F5 = ff.field_for_q(2), ff.field_for_q(3), ff.field_for_q(5)


def J(F, n=2):
    return MatrixFF.jordan_nilpotent(F, n)


def random_matrix(rng, F, n):
    return MatrixFF.from_code(F, n, rng.randrange(F.q ** (n * n)))


def random_invertible(rng, F, n):
    while True:
        P = random_matrix(rng, F, n)
        if linalg.is_nonsingular(P):
            return P


def test_mat_arith_examples():
    assert MatrixFF.identity(F3, 2).scale(2) == MatrixFF.diag(F3, [2, 2])
    A = MatrixFF(F3, [[1, 2], [0, 1]])
    assert linalg.mat_arith("pow", A, 3) == A * A * A
    assert linalg.mat_arith("add", A, A) == A.scale(2)
    with pytest.raises(ValueError):
        A * MatrixFF.identity(F3, 3)
    with pytest.raises(ValueError):
        A + MatrixFF.identity(F5, 2)


def test_code_round_trip():
    for code in range(3**4):
        assert MatrixFF.from_code(F3, 2, code).to_code() == code


def test_rank_nullity_examples():
    assert linalg.rank_nullity(MatrixFF.zero(F2, 3)) == (0, 3)
    assert linalg.rank_nullity(MatrixFF.identity(F5, 3)) == (3, 0)
    assert linalg.rank_nullity(MatrixFF(F2, [[1, 1], [1, 1]])) == (1, 1)


def test_classify_examples():
    assert linalg.classify(MatrixFF.identity(F3, 2)) == "nonsingular"
    assert linalg.classify(J(F3)) == "nilpotent"
    assert linalg.classify(MatrixFF.diag(F3, [0, 1])) == "mixed"


def test_classify_partition_counts():
    # |GL_2(F_3)| = 48 and q^(n^2 - n) = 9 nilpotents
    kinds = [linalg.classify(A) for A in MatrixFF.all(F3, 2)]
    assert kinds.count("nonsingular") == 48
    assert kinds.count("nilpotent") == 9


def test_fitting_examples():
    fp = linalg.fitting_decompose(MatrixFF.zero(F2, 2))
    assert len(fp.kernel_basis) == 2 and len(fp.image_basis) == 0
    fp = linalg.fitting_decompose(MatrixFF.identity(F2, 2))
    assert len(fp.kernel_basis) == 0 and len(fp.image_basis) == 2
    fp = linalg.fitting_decompose(MatrixFF.diag(F2, [0, 1]))
    assert [list(v) for v in fp.kernel_basis] == [[1, 0]]
    assert [list(v) for v in fp.image_basis] == [[0, 1]]


@pytest.mark.parametrize("F,n", [(F2, 3), (F3, 2), (ff.field_for_q(4), 2)])
def test_fitting_invariants_exhaustive(F, n):
    for A in MatrixFF.all(F, n):
        fp = linalg.fitting_decompose(A)
        K, I = fp.kernel_basis, fp.image_basis
        assert len(K) + len(I) == n
        P = fp.change_of_basis(F)
        assert linalg.is_nonsingular(P)
        # A maps each piece into itself; nilpotent on K, invertible on I
        An = A ** n
        for v in K:
            assert linalg.span_contains(F, K, A.apply(v))
            assert not any(An.apply(v))
        for v in I:
            assert linalg.span_contains(F, I, A.apply(v))
        assert linalg.rank(F, [A.apply(v) for v in I]) == len(I)


def test_twisted_dim_examples():
    for z in F5.units():
        if z.code != 1:
            assert linalg.twisted_centralizer_dim(MatrixFF(F5, [[3]]), z) == 0
    assert linalg.twisted_centralizer_dim(MatrixFF.zero(F3, 3), 2) == 9
    assert linalg.twisted_centralizer_dim(J(F3), F3.element(2)) == 2
    with pytest.raises(ZeroDivisionError):
        linalg.twisted_centralizer_dim(J(F3), 0)


def test_twisted_dim_matches_brute_force():
    for A in MatrixFF.all(F2, 2):
        for z in F2.units():
            sols = sum(linalg.twisted_commute(A, B, z.code) for B in MatrixFF.all(F2, 2))
            assert sols == 2 ** linalg.twisted_centralizer_dim(A, z)
    rng = random.Random(3)
    for _ in range(15):
        A = random_matrix(rng, F3, 2)
        for z in F3.units():
            sols = sum(linalg.twisted_commute(A, B, z.code) for B in MatrixFF.all(F3, 2))
            assert sols == 3 ** linalg.twisted_centralizer_dim(A, z)


def test_invariant_factor_examples():
    t_minus_1 = PolyFF(F5, [4, 1])
    assert tuple(linalg.invariant_factors(MatrixFF.identity(F5, 2))) == (t_minus_1, t_minus_1)
    g = PolyFF(F5, [2, 0, 3, 1])
    assert tuple(linalg.invariant_factors(MatrixFF.companion(g))) == (g,)
    assert tuple(linalg.invariant_factors(J(F3))) == (PolyFF(F3, [0, 0, 1]),)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from((2, 3, 4, 5)), st.integers(1, 4), st.integers(0, 2**40))
def test_invariant_factor_chain_properties(q, n, seed):
    F = ff.field_for_q(q)
    rng = random.Random(seed)
    A = random_matrix(rng, F, n)
    chain = tuple(linalg.invariant_factors(A))
    assert sum(g.degree for g in chain) == n
    assert all(g.is_monic() and g.degree >= 1 for g in chain)
    for a, b in zip(chain, chain[1:]):
        assert (b % a).is_zero()
    prod = PolyFF(F, [1])
    for g in chain:
        prod = prod * g
    assert prod == linalg.char_poly(A)
    # the largest factor is the minimal polynomial: it annihilates A
    top = chain[-1]
    acc = MatrixFF.zero(F, n)
    for e, c in enumerate(top.coeffs):
        acc = acc + (A**e).scale(c)
    assert acc.is_zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from((2, 3, 5)), st.integers(1, 3), st.integers(0, 2**40))
def test_conjugation_invariance(q, n, seed):
    F = ff.field_for_q(q)
    rng = random.Random(seed)
    A = random_matrix(rng, F, n)
    P = random_invertible(rng, F, n)
    C = P * A * P.inverse()
    assert linalg.invariant_factors(C) == linalg.invariant_factors(A)
    assert linalg.is_similar(A, C)
    for z in F.units():
        assert linalg.twisted_centralizer_dim(C, z) == linalg.twisted_centralizer_dim(A, z)


def test_is_similar_examples():
    A = MatrixFF(F3, [[1, 2], [0, 2]])
    assert linalg.is_similar(A, A)
    assert not linalg.is_similar(MatrixFF.identity(F3, 2), MatrixFF.identity(F3, 2).scale(2))
    assert linalg.is_similar(J(F3), J(F3).transpose())
    with pytest.raises(ValueError):
        linalg.is_similar(A, MatrixFF.identity(F3, 3))


def test_similarity_classes_gl2_f2():
    # four monic quadratics plus (t, t) and (t+1, t+1)
    classes = {linalg.invariant_factors(A) for A in MatrixFF.all(F2, 2)}
    assert len(classes) == 6


def test_similar_to_zeta_multiple_examples():
    z = F3.element(2)
    assert linalg.similar_to_zeta_multiple(MatrixFF.diag(F3, [1, 2]), z)
    assert not linalg.similar_to_zeta_multiple(MatrixFF.identity(F3, 2), z)
    rng = random.Random(0)
    for _ in range(10):
        assert linalg.similar_to_zeta_multiple(random_matrix(rng, F5, 3), F5.one)
    with pytest.raises(ZeroDivisionError):
        linalg.similar_to_zeta_multiple(J(F3), F3.zero)


@pytest.mark.parametrize("route", ["similarity", "pm"])
def test_routes_individually(route):
    for B in MatrixFF.all(F3, 2):
        for z in F3.units():
            assert linalg.similar_to_zeta_multiple(B, z, route=route) == linalg.similar_to_zeta_multiple(B, z)


def test_fitting_splits_the_equation_exhaustive_small():
    # AB = zBA  <=>  B preserves K_A and I_A with both restricted equations
    from qcommute.oracle import verify_fitting

    for z in F2.units():
        assert verify_fitting(F2, 2, z).passed
    assert verify_fitting(F3, 2, F3.element(2)).passed
