from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.appkit import fixture, subsurface
from ellsurf.exactalg import GF, QQ, Poly
from ellsurf.sections import (
    HeightPairing,
    SearchBudgetExceeded,
    choose_good_prime,
    frobenius,
    frobenius_image,
    gram,
    mw_basis,
    search_integral,
    search_via_ideal,
    span_rank,
)
from ellsurf.weierstrass import Section, WeierstrassModel, add, negate, sub

t = Poly.gen(QQ)

_CACHE = {}


def _ideal(name, model, p):
    """Ideal-backend sections of ``model`` mod p, with the model over their field."""
    key = (name, p)
    if key not in _CACHE:
        F = GF(p)
        Ep = model.extend(F, F)
        S = search_via_ideal(Ep)
        K = S.sections[0].x.ring
        _CACHE[key] = (Ep, S, Ep.extend(K, F.embedding_into(K)))
    return _CACHE[key]


def _five():
    return {
        "example1": fixture("example1").model(),
        "t3(t+1)": fixture("t3(t+1)").model(),
        "t3(t+1)x": fixture("t3(t+1)x").model(),
        "t2(t+1)": subsurface("t2(t+1)").model(),
        "(t4+1)x": WeierstrassModel.short(QQ, t**4 + 1, 0),
    }


FIVE = _five()


def test_search_integral_example():
    F = GF(7)
    s = Poly.gen(F)
    E = WeierstrassModel.short(F, 0, s**4 + s**3)
    keys = {P.key() for P in search_integral(E)}
    assert Section(-s, s**2).key() in keys and Section(-s, -(s**2)).key() in keys


def test_search_integral_budget():
    F = GF(10007)
    s = Poly.gen(F)
    with pytest.raises(SearchBudgetExceeded, match="use elimination backend"):
        search_integral(WeierstrassModel.short(F, 0, s**5 + 1))


def test_search_integral_needs_fq():
    with pytest.raises(TypeError):
        search_integral(WeierstrassModel.short(QQ, 0, t**5 + 1))


@pytest.mark.parametrize("name", sorted(FIVE))
def test_cross_backend_equality(name):
    Ep, S, EK = _ideal(name, FIVE[name], 5)
    B = search_integral(EK)
    assert sorted(P.key() for P in S.sections) == sorted(P.key() for P in B.sections)


def test_field_degrees_example1():
    _, S, EK = _ideal("example1", FIVE["example1"], 5)
    assert len(S) == 60 and sorted(set(S.degrees.values())) == [1, 2]
    fd = frobenius(S)
    assert fd.fod_degree == 2 and sum(fd.orbit_degrees) == 60


def test_heights_example():
    # P = (-t, t) on t^3 + t^2 meets non-identity components of I0* and IV
    E = WeierstrassModel.short(QQ, 0, t**3 + t**2)
    H = HeightPairing(E)
    assert H.height(Section(-t, t)) == Fraction(1, 3)
    assert H.height(Section.zero()) == 0


def test_torsion_has_height_zero():
    E = WeierstrassModel.short(QQ, t**4 + 1, 0)
    assert HeightPairing(E).height(Section(0 * t, 0 * t)) == 0


def test_example1_lattice():
    _, S, EK = _ideal("example1", FIVE["example1"], 5)
    H = HeightPairing(EK)
    assert span_rank(EK, S.sections, H) == 4
    basis, G, tors, inv = mw_basis(EK, S.sections, H)
    assert len(basis) == 4 and inv == ()
    assert gram(EK, basis, H).determinant > 0


def test_choose_good_prime():
    assert choose_good_prime(fixture("example1").model()) == 5
    assert choose_good_prime(fixture("example1").model(), avoid=[5]) > 5
    with pytest.raises(TypeError):
        choose_good_prime(WeierstrassModel.short(GF(7), 0, Poly.gen(GF(7)) ** 5 + 1))


# -- properties --------------------------------------------------------------

_LATTICES = {}


def _lattice(name):
    if name not in _LATTICES:
        _, S, EK = _ideal(name, FIVE[name], 5)
        _LATTICES[name] = (EK, [P for P in S.sections if not P.is_zero()], HeightPairing(EK))
    return _LATTICES[name]


names = st.sampled_from(["example1", "t3(t+1)", "t2(t+1)", "(t4+1)x"])


@given(names, st.data())
def test_parallelogram_law(name, data):
    E, secs, H = _lattice(name)
    P = data.draw(st.sampled_from(secs))
    Q = data.draw(st.sampled_from(secs))
    assert H.height(add(E, P, Q)) + H.height(sub(E, P, Q)) == 2 * H.height(P) + 2 * H.height(Q)
    assert H.height(P) >= 0
    assert H.pairing(P, Q) == H.pairing(Q, P)
    assert H.height(negate(E, P)) == H.height(P)


@given(names, st.data())
def test_gram_invariant_under_frobenius(name, data):
    E, secs, H = _lattice(name)
    q = E.ring.p
    P = data.draw(st.sampled_from(secs))
    Q = data.draw(st.sampled_from(secs))
    FP, FQ = frobenius_image(P, q), frobenius_image(Q, q)
    assert H.pairing(FP, FQ) == H.pairing(P, Q)
