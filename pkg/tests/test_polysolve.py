import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.exactalg import GF, QQ
from ellsurf.polysolve import (
    MultiPoly,
    NotZeroDimensional,
    QuotientAlgebra,
    buchberger,
    eliminate,
    polynomial_ring,
    radical,
    variety_fq,
)


def test_buchberger_examples():
    x, y = polynomial_ring(QQ, "xy")
    G = buchberger([x + y - 3, x - y - 1], "lex")
    assert G.generators == [x - 2, y - 1] or set(map(str, G.generators)) == {str(x - 2), str(y - 1)}
    G = buchberger([x**2 + y**2 - 1, x - y], "lex")
    # reduced and monic: {x - y, y^2 - 1/2}
    assert {str(g) for g in G.generators} == {str(x - y), str(y**2 - MultiPoly.const(QQ, ("x", "y"), QQ("1/2")))}


def test_mixed_fields_rejected():
    (x,) = polynomial_ring(QQ, "x")
    (z,) = polynomial_ring(GF(7), "x")
    with pytest.raises((TypeError, ValueError)):
        buchberger([x - 1, z - 1])


def test_unit_ideal():
    x, y = polynomial_ring(QQ, "xy")
    G = buchberger([x, x - 1])
    assert G.is_unit()


def test_eliminate_examples():
    x, y = polynomial_ring(QQ, "xy")
    G = buchberger([x - y, 2 * y**2 - 1], "lex")
    E = eliminate(G, ["y"])
    assert len(E.generators) == 1 and E.generators[0].total_degree() == 2
    G = buchberger([x - 2, y - 1], "lex")
    assert [str(g) for g in eliminate(G, ["y"]).generators] == ["y - 1"]


def test_eliminate_order_mismatch():
    x, y, z = polynomial_ring(QQ, "xyz")
    G = buchberger([x * y - 1, x**2 + y, z - x], "lex")
    with pytest.raises(ValueError, match="order mismatch"):
        eliminate(G, ["x", "y"])


def test_variety_examples():
    F = GF(7)
    (x,) = polynomial_ring(F, "x")
    pts = variety_fq(buchberger([x**2 - 2]))
    assert sorted(int(P.coords[0]) for P in pts) == [3, 4] and all(P.degree == 1 for P in pts)
    pts = variety_fq(buchberger([x**2 + 1]))
    assert len(pts) == 2 and all(P.degree == 2 for P in pts)
    F5 = GF(5)
    x, y = polynomial_ring(F5, "xy")
    pts = variety_fq(buchberger([x**2 + y**2 - 1, x - y]))
    assert len(pts) == 2 and all(P.degree == 2 for P in pts)
    for P in pts:
        a, b = P.coords
        assert a == b and 2 * b * b == 1


def test_positive_dimensional():
    x, y = polynomial_ring(GF(7), "xy")
    with pytest.raises(NotZeroDimensional):
        variety_fq(buchberger([x * y]))


def _eval_in(g, P, base):
    K = P.field
    h = base.embedding_into(K)
    return g.map_coeffs(K, h).evaluate(P.coords)


@st.composite
def triangular_systems(draw):
    p = draw(st.sampled_from([5, 7, 11, 13, 31]))
    F = GF(p)
    nv = draw(st.integers(1, 3))
    names = "xyz"[:nv]
    V = polynomial_ring(F, names)
    c = lambda: F(draw(st.integers(0, p - 1)))
    gens = []
    for i, v in enumerate(V):
        d = draw(st.integers(1, 3))
        g = v**d
        for k in range(d):
            g = g + c() * v**k
        for w in V[:i]:
            g = g + c() * w
        gens.append(g)
    # an extra random generator keeps the shape non-trivial
    if nv > 1:
        gens.append(gens[-1] * V[0] + c() * gens[0])
    return F, names, gens


@given(triangular_systems())
def test_variety_matches_brute_force(data):
    F, names, gens = data
    G = buchberger(gens)
    pts = variety_fq(G)
    for P in pts:
        assert all(_eval_in(g, P, F) == 0 for g in gens)
    # rational points agree with brute force over F_q
    p = F.p
    brute = {
        tuple(v)
        for v in itertools.product(range(p), repeat=len(names))
        if all(g.evaluate([F(a) for a in v]) == 0 for g in gens)
    }
    rat = {tuple(int(c) for c in P.coords) for P in pts if P.degree == 1}
    assert rat == brute
    # total number of points equals the dimension of the radical quotient
    if not G.is_unit():
        assert len(pts) == QuotientAlgebra(radical(G)).dim


@given(triangular_systems(), st.randoms(use_true_random=False))
def test_groebner_membership_and_uniqueness(data, rnd):
    F, names, gens = data
    G = buchberger(gens)
    for g in gens:
        assert G.contains(g)
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    shuffled = [g * F(rnd.randrange(1, F.p)) for g in shuffled]
    H = buchberger(shuffled)
    assert sorted(map(str, G.generators)) == sorted(map(str, H.generators))


def test_coefficient_system_matches_brute_over_f11():
    from ellsurf.exactalg import Poly
    from ellsurf.sections import coefficient_system, search_integral
    from ellsurf.weierstrass import WeierstrassModel

    F = GF(11)
    t = Poly.gen(F)
    E = WeierstrassModel.short(F, 0, t**2 * (t + 1))
    eqs, names, xd, yd = coefficient_system(E)
    assert len(names) == 7 and len(eqs) == 7
    pts = variety_fq(buchberger(eqs))
    rational = {tuple(int(c) for c in P.coords) for P in pts if P.degree == 1}
    brute = search_integral(E)
    keys = set()
    for S in brute:
        if S.is_zero():
            continue
        xs = list(S.xp.coeffs) + [0] * (3 - len(S.xp.coeffs))
        ys = list(S.yp.coeffs) + [0] * (4 - len(S.yp.coeffs))
        keys.add(tuple(int(c) for c in list(reversed(xs)) + list(reversed(ys))))
    assert rational == keys


def test_radical_of_double_root():
    F = GF(7)
    (x,) = polynomial_ring(F, "x")
    R = radical(buchberger([(x - 1) ** 2 * (x - 2)]))
    assert QuotientAlgebra(R).dim == 2

