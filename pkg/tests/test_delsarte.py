from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.delsarte import (
    DegenerateDelsarte,
    DelsarteSurface,
    delsarte_rank,
    element_in_lambda,
    group_L,
    lambda_count,
    picard_number,
)
from ellsurf.exactalg import QQ, Poly
from ellsurf.fibres import fibre_inventory, shioda_tate_rank
from ellsurf.weierstrass import WeierstrassModel

t = Poly.gen(QQ)


def _surface(a6, chi=1):
    E = WeierstrassModel.short(QQ, 0, a6, chi=chi)
    return E, DelsarteSurface.from_model(E)


def test_e68_rank():
    E, S = _surface(t**360 + 1, 60)
    assert S.matrix == ((0, 0, 2, 358), (0, 3, 0, 357), (360, 0, 0, 0), (0, 0, 0, 360))
    assert delsarte_rank(S, E) == 68
    assert picard_number(S, E) == 70


def test_k3_rank():
    E, S = _surface(t * (t**10 + 1), 2)
    assert delsarte_rank(S, E) == 16 and picard_number(S, E) == 18


@pytest.mark.parametrize(
    "a6",
    [t**5 + 1, t**4 + t**2, t**3 + t**2, t**4 + t**3, t * (t**5 + 1), t * (t**4 + 1), t**2 * (t**3 + 1)],
    ids=str,
)
def test_agrees_with_shioda_tate_on_rational_blocks(a6):
    E, S = _surface(a6)
    fs = fibre_inventory(E)
    assert delsarte_rank(S, E, fs) == shioda_tate_rank(E, fibres=fs)


def test_from_rows_homogenizes():
    S = DelsarteSurface.from_rows([(0, 0, 2), (0, 3, 0), (5, 0, 0), (0, 0, 0)])
    assert S.matrix == ((0, 0, 2, 3), (0, 3, 0, 2), (5, 0, 0, 0), (0, 0, 0, 5))


def test_degenerate_inputs():
    with pytest.raises(DegenerateDelsarte):
        DelsarteSurface.from_rows([[1, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    with pytest.raises(DegenerateDelsarte):
        DelsarteSurface.from_model(WeierstrassModel.short(QQ, t, t**2 + 1))
    with pytest.raises(DegenerateDelsarte):
        DelsarteSurface(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_lambda_membership():
    F = Fraction
    assert not element_in_lambda([F(1, 2)] * 4)
    assert not element_in_lambda([F(1, 3), F(1, 3), F(2, 3), F(2, 3)])
    assert element_in_lambda([F(1, 5), F(1, 5), F(1, 5), F(2, 5)])
    assert not element_in_lambda([0, F(1, 2), F(1, 2), F(1, 2)])


def test_quantifier_argument():
    L = group_L(_surface(t * (t**10 + 1), 2)[1])
    assert lambda_count(L, "forall") <= lambda_count(L, "exists")
    with pytest.raises(ValueError):
        lambda_count(L, "some")


# -- properties --------------------------------------------------------------


@st.composite
def diagonal_like(draw):
    """a6 = t^a (t^b + 1) with small exponents, chi chosen to fit."""
    a = draw(st.integers(0, 5))
    b = draw(st.integers(1, 12))
    deg = a + b
    chi = max(1, -(-deg // 6))
    return a, b, chi


@given(diagonal_like())
def test_group_L_is_closed_and_rank_consistent(data):
    a, b, chi = data
    a6 = t**a * (t**b + 1)
    E = WeierstrassModel.short(QQ, 0, a6, chi=chi)
    try:
        S = DelsarteSurface.from_model(E)
        fs = fibre_inventory(E)
    except (DegenerateDelsarte, ValueError):
        return
    L = group_L(S)
    N = L.N
    elems = set(L.elements)
    assert len(elems) == len(L.elements)
    g = L.elements[len(L.elements) // 2]
    for h in L.elements[:: max(1, len(L.elements) // 7)]:
        assert tuple((x + y) % N for x, y in zip(g, h)) in elems
    # a in L means a.A is integral with coordinate sum divisible by the degree
    d = sum(S.matrix[0])
    for v in L.elements:
        c = [sum(v[i] * S.matrix[i][j] for i in range(4)) for j in range(4)]
        assert all(x % N == 0 for x in c)
        assert sum(c) % (N * d) == 0
    try:
        r = delsarte_rank(S, E, fs)
    except ValueError:
        return
    assert 0 <= r <= 12 * chi - 4
    if chi == 1:
        assert r == shioda_tate_rank(E, fibres=fs)
