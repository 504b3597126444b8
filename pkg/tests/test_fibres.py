from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.exactalg import GF, QQ, Poly
from ellsurf.fibres import (
    UnsupportedCharacteristic,
    bad_places,
    classify_valuations,
    euler_data,
    fibre_inventory,
    fibre_symbols,
    local_contribution,
    mw_shape_check,
    shioda_tate_rank,
    zero_intersection,
)
from ellsurf.weierstrass import Section, SingularSurface, WeierstrassModel, transform

t = Poly.gen(QQ)

CASES = [
    (0, t**5 + 1, [("II", 1), ("II", 1), ("II", 4)], 8),
    (0, t**4 + t**2, [("II", 2), ("IV", 1), ("IV", 1)], 4),
    (0, t**3 + t**2, [("I0*", 1), ("II", 1), ("IV", 1)], 2),
    (t, 0, [("III", 1), ("III*", 1)], 0),
    (t**4 + 1, 0, [("III", 4)], 4),
    (-3 * t * (t**2 - 1), (t**2 - 1) ** 2, [("I1", 3), ("III", 1), ("III", 1), ("III", 1)], 5),
]


@pytest.mark.parametrize("a4,a6,symbols,rank", CASES)
def test_inventory_and_rank(a4, a6, symbols, rank):
    E = WeierstrassModel.short(QQ, a4, a6)
    fs = fibre_inventory(E)
    assert fibre_symbols(fs) == symbols
    assert euler_data(E, fs)[:2] == (12, 10)
    assert shioda_tate_rank(E, fibres=fs) == rank


def test_classify_table():
    assert classify_valuations(0, 0, 0)[0] == "I0"
    assert classify_valuations(0, 0, 5)[:4] == ("I5", 5, 5, 5)
    assert classify_valuations(float("inf"), 1, 2)[0] == "II"
    assert classify_valuations(2, 3, 6)[0] == "I0*"
    assert classify_valuations(2, 3, 9)[:3] == ("I3*", 3, 8)
    # non-minimal: k = 1 is stripped before the lookup
    sym, *_, k, _, _, _ = classify_valuations(5, 7, 14)
    assert sym == "II" and k == 1
    with pytest.raises(ValueError):
        classify_valuations(3, 5, 7)


def test_bad_places_includes_infinity():
    pl = bad_places(WeierstrassModel.short(QQ, 0, t**5 + 1))
    assert pl[-1].is_infinity() and [v.degree for v in pl] == [1, 4, 1]
    pl = bad_places(WeierstrassModel.short(QQ, 0, t**6 + 1))
    assert not any(v.is_infinity() for v in pl)


def test_small_characteristic_rejected():
    # GF refuses characteristic 2 and 3 outright
    with pytest.raises(ValueError, match="unsupported residue characteristic"):
        GF(3)
    assert issubclass(UnsupportedCharacteristic, ValueError)


def test_chi_two_needs_picard():
    E = WeierstrassModel.short(QQ, 0, t * (t**10 + 1), chi=2)
    with pytest.raises(ValueError):
        shioda_tate_rank(E)
    fs = fibre_inventory(E)
    assert euler_data(E, fs)[0] == 24


def test_local_contributions_and_zero_intersection():
    E = WeierstrassModel.short(QQ, 0, t**3 + t**2)
    P = Section(-t, t)  # x^3 + t^3 + t^2 at x = -t is t^2
    fs = fibre_inventory(E)
    by_sym = {F.symbol: F for F in fs}
    assert zero_intersection(E, P, fs) == 0
    # P meets a non-identity component of I0* and IV: 1 + 2/3
    total = sum(local_contribution(E, F, P) for F in fs)
    assert total == Fraction(5, 3)
    assert local_contribution(E, by_sym["II"], P) == 0


def test_mw_shape_rows():
    assert mw_shape_check(8) and not mw_shape_check(9)
    assert mw_shape_check(4, (2,)) and not mw_shape_check(1, (5,))
    assert not mw_shape_check(0, (7,))


# -- property: sum of Euler numbers is 12 chi -------------------------------


def _model(F, a4c, a6c):
    return WeierstrassModel.short(F, Poly(F, a4c), Poly(F, a6c))


coef = st.integers(-4, 4)


@given(st.lists(coef, max_size=5), st.lists(coef, max_size=7), st.sampled_from([0, 5, 7, 11]))
def test_euler_sum_is_twelve_chi(a4c, a6c, p):
    F = QQ if p == 0 else GF(p)
    try:
        E = _model(F, a4c, a6c)
        fs = fibre_inventory(E)
    except (SingularSurface, ValueError):
        return
    e = sum(f.place.degree * f.e_v for f in fs)
    assert e == 12 * E.chi
    assert shioda_tate_rank(E, fibres=fs) <= 8


@given(st.lists(coef, min_size=1, max_size=7), st.integers(-3, 3), st.integers(1, 3))
def test_inventory_invariant_under_transform(a6c, r, u):
    try:
        E = _model(QQ, [], a6c)
        fs = fibre_inventory(E)
    except (SingularSurface, ValueError):
        return
    F, _ = transform(E, u, 0 if r == 0 else Poly(QQ, [r]))
    assert fibre_symbols(fibre_inventory(F)) == fibre_symbols(fs)
