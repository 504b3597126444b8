from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.exactalg import (
    GF,
    NOT_A_SQUARE,
    QQ,
    ZZ,
    Poly,
    det,
    factor_fq,
    factor_q,
    gram_schmidt_norms,
    hensel_lift,
    is_lll_reduced,
    lll,
    poly_sqrt,
    roots_fq,
    snf,
)
from ellsurf.exactalg.matrix import matmul


def P(F, cs, var="x"):
    return Poly(F, cs, var)


def _prod(F, factors, var="x"):
    out = P(F, [1], var)
    for g, e in factors:
        out = out * g**e
    return out


# -- spec examples ----------------------------------------------------------


def test_factor_fq_examples():
    F5, F7 = GF(5), GF(7)
    assert [g.coeffs for g, _ in factor_fq(P(F5, [1, 0, 1]))] == [(F5(2), F5(1)), (F5(3), F5(1))]
    assert len(factor_fq(P(F7, [1, 0, 1]))) == 1
    fac = factor_fq(P(F5, [0, -1, 0, 1]))
    assert sorted(int(-g.coeffs[0]) for g, _ in fac) == [0, 1, 4]


def test_factor_fq_zero_input():
    with pytest.raises(ValueError, match="zero input"):
        factor_fq(P(GF(5), []))


def test_factor_q_examples():
    fac = factor_q(P(QQ, [-1, 0, 0, 0, 1]))
    assert [g.degree for g, _ in fac] == [1, 1, 2]
    sextic = P(QQ, [8708389056, -60466176, 34992, 186624, 324, 0, 1])
    assert len(factor_q(sextic)) == 1
    assert len(factor_q(P(QQ, [-1, -1, 1]))) == 1


def test_hensel_examples():
    x = Poly.gen(GF(7), "x")
    lifted = hensel_lift(P(ZZ, [-2, 0, 1]), [x - 3, x - 4], 2)
    roots = sorted(int(-g.coeffs[0]) % 49 for g in lifted)
    assert roots == [10, 39]
    lifted = hensel_lift(P(ZZ, [-2, 0, 1]), [x - 3, x - 4], 4)
    for g in lifted:
        r = int(-g.coeffs[0])
        assert (r * r - 2) % 7**4 == 0
    same = hensel_lift(P(ZZ, [-2, 0, 1]), [x - 3, x - 4], 1)
    assert sorted(int(-g.coeffs[0]) % 7 for g in same) == [3, 4]


def test_hensel_rejects_non_coprime():
    x = Poly.gen(GF(7), "x")
    with pytest.raises(ValueError):
        hensel_lift(P(ZZ, [9, -6, 1]), [x - 3, x - 3], 2)


def test_snf_examples():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert snf(I3)[1] == I3
    U, D, V = snf([[2, 4], [6, 8]])
    assert [D[0][0], D[1][1]] == [2, 4]
    assert snf([[0, 0], [0, 0]])[1] == [[0, 0], [0, 0]]


def test_lll_examples():
    T, G, k = lll([[1, 0], [0, 1]])
    assert G == [[1, 0], [0, 1]] and k == 0
    T, G, k = lll([[4, 2], [2, 4]])
    assert gram_schmidt_norms(G) == [4, 3]
    T, G, k = lll([[1, 1], [1, 1]])
    assert k == 1 and G[0][0] == 0 and G[1][1] == 1


def test_lll_rejects_asymmetric():
    with pytest.raises(ValueError):
        lll([[1, 2], [0, 1]])


def test_poly_sqrt_examples():
    assert poly_sqrt(P(QQ, [1, 0, 2, 0, 1], "t")) == P(QQ, [1, 0, 1], "t")
    assert poly_sqrt(P(QQ, [0, 0, 0, 1, 1], "t")) is NOT_A_SQUARE
    g = P(QQ, [5, -2, 0, 1], "t")
    assert poly_sqrt(g * g) == g


# -- properties --------------------------------------------------------------

small = st.integers(-20, 20)
coeffs = st.lists(small, min_size=1, max_size=6)
primes = st.sampled_from([5, 7, 11, 13, 31])


@given(coeffs, coeffs, coeffs, primes)
def test_ring_axioms_fp(a, b, c, p):
    F = GF(p)
    A, B, C = P(F, a), P(F, b), P(F, c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A + B == B + A


@given(coeffs, coeffs, coeffs)
def test_ring_axioms_q(a, b, c):
    A, B, C = P(QQ, a), P(QQ, [Fraction(x, 3) for x in b]), P(QQ, c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C


@given(st.lists(small, min_size=2, max_size=7).filter(lambda v: v[-1] != 0), primes)
def test_factor_fq_remultiplies(cs, p):
    F = GF(p)
    f = P(F, cs)
    if f.degree < 1:
        return
    fac = factor_fq(f)
    assert _prod(F, fac) * f.lc == f
    for g, _ in fac:
        assert g.lc == 1
        if g.degree <= 3:
            assert g.degree == 1 or not any(g(F(r)) == 0 for r in range(p))


@given(st.lists(small, min_size=2, max_size=6).filter(lambda v: v[-1] != 0))
def test_factor_q_remultiplies(cs):
    f = P(QQ, cs)
    if f.degree < 1:
        return
    fac = factor_q(f)
    assert _prod(QQ, fac) * f.lc == f


@given(st.lists(small, min_size=1, max_size=5).filter(lambda v: v[-1] != 0), primes)
def test_poly_sqrt_roundtrip(cs, p):
    for F in (QQ, GF(p)):
        g = P(F, cs, "t")
        if g.is_zero():
            continue
        r = poly_sqrt(g * g)
        assert r is not NOT_A_SQUARE
        assert r * r == g * g
        assert r == g or r == -g


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=2, max_size=4))
def test_snf_unimodular(M):
    U, D, V = snf(M)
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i in range(len(diag)):
        for j in range(len(D[0])):
            if i != j and i < len(D):
                assert D[i][j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_lll_unimodular(B):
    # Gram of integer vectors (possibly dependent)
    G = [[sum(a * b for a, b in zip(u, v)) for v in B] for u in B]
    T, G2, k = lll(G)
    assert abs(det(T)) == 1
    Tt = [list(r) for r in zip(*T)]
    assert matmul(matmul(T, G), Tt) == G2
    assert all(G2[i][i] == 0 for i in range(k))
    rest = [r[k:] for r in G2[k:]]
    assert is_lll_reduced(rest)


def test_roots_fq_consistent():
    F = GF(13)
    f = P(F, [-1, 0, 0, 1])
    assert sorted(int(r) for r in roots_fq(f)) == [1, 3, 9]
