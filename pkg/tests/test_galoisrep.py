import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.galoisrep import (
    RepresentationError,
    character_and_faithfulness,
    character_table_mod,
    conjugacy_classes,
    decompose,
    mw_representation,
    permutation_action,
)
from ellsurf.splitfield import _closure, composition_table, compose


def _group(gens, n):
    return sorted(_closure(gens, n))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _root_lattice(n):
    """Basis of the sum-zero sublattice A_{n-1} of Z^n."""
    return [[1 if j == i else -1 if j == i + 1 else 0 for j in range(n)] for i in range(n - 1)]


S3 = _group([(1, 2, 0), (1, 0, 2)], 3)


def test_conjugacy_classes_s3():
    cls = conjugacy_classes(S3)
    assert [len(c) for c in cls] == [1, 3, 2]


def test_character_table_s3():
    cls = conjugacy_classes(S3)
    ell, table = character_table_mod(S3, cls)
    sym = [[v if v <= ell // 2 else v - ell for v in row] for row in table]
    assert sorted(sym) == [[1, -1, 1], [1, 1, 1], [2, 0, -1]]


def test_standard_representation_of_s3():
    act = permutation_action()
    rep = mw_representation(_root_lattice(3), _dot, S3, act, composition_table(S3), "S3")
    ch = character_and_faithfulness(rep)
    assert ch.character == [2, 0, -1] and ch.faithful
    assert ch.class_labels == ["1x1", "3x2", "2x3"]
    dec = decompose(rep)
    assert dec.rational == [([2, 0, -1], 2, 1)]


def test_dependent_basis_rejected():
    act = permutation_action()
    with pytest.raises(RepresentationError):
        mw_representation([[1, -1, 0], [2, -2, 0]], _dot, S3, act)


def test_non_generating_basis_rejected():
    # an index-2 sublattice of A2 that S3 does not preserve
    act = permutation_action()
    basis = [[2, -2, 0], [0, 1, -1]]
    with pytest.raises(RepresentationError):
        mw_representation(basis, _dot, S3, act)


def test_trivial_action_kernel():
    act = permutation_action()
    G = _group([(1, 0, 2, 3)], 4)
    # vectors supported on the fixed coordinates 2, 3
    rep = mw_representation([[0, 0, 1, -1]], _dot, G, act, composition_table(G))
    ch = character_and_faithfulness(rep)
    assert ch.character == [1, 1] and not ch.faithful and len(ch.kernel) == 2


# -- property: rho is a homomorphism preserving the Gram matrix ------------------


@st.composite
def actions(draw):
    n = draw(st.integers(3, 5))
    rnd = random.Random(draw(st.integers(0, 10**6)))
    k = draw(st.integers(1, 2))
    gens = []
    for _ in range(k):
        p = list(range(n))
        rnd.shuffle(p)
        gens.append(tuple(p))
    # random unimodular change of basis of A_{n-1}
    B = _root_lattice(n)
    for _ in range(draw(st.integers(0, 6))):
        i, j = rnd.sample(range(n - 1), 2)
        c = rnd.choice([-2, -1, 1, 2])
        B[i] = [a + c * b for a, b in zip(B[i], B[j])]
    return n, gens, B


@given(actions())
def test_rho_homomorphism_and_gram(data):
    n, gens, B = data
    G = _group(gens, n)
    table = composition_table(G)
    rep = mw_representation(B, _dot, G, permutation_action(), table)
    gram = rep.gram
    r = len(B)
    mul = lambda X, Y: [[sum(X[i][k] * Y[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
    tr = lambda X: [list(c) for c in zip(*X)]
    for a in range(len(G)):
        M = rep.matrices[a]
        assert mul(mul(tr(M), gram), M) == gram
        for b in range(len(G)):
            assert mul(M, rep.matrices[b]) == rep.matrices[table[a][b]]
            assert G[table[a][b]] == compose(G[a], G[b])
    ch = character_and_faithfulness(rep)
    assert ch.character[0] == r
    dec = decompose(rep)
    assert sum(m * d for m, d in zip(dec.multiplicities, dec.degrees)) == r
