import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ellsurf.appkit.fixtures import example1_sextic
from ellsurf.exactalg import QQ, Poly
from ellsurf.splitfield import (
    BadPrime,
    DegreeBoundExceeded,
    NotSquarefree,
    NumberField,
    apply_aut,
    chebotarev_estimate,
    factor_over_numberfield,
    group_name,
    split_aut_grp,
)

x = Poly.gen(QQ, "x")


def _check(R, fs):
    g = R.field.g
    assert len(R.group) == R.field.degree == len(R.aut_of_field)
    for a in R.aut_of_field:
        assert apply_aut(a.image, g, g).is_zero()
    for f, roots in zip(fs, R.roots):
        assert len(roots) == f.degree
        for r in roots:
            assert (f.compose(r) % g).is_zero()
        assert len({r.key() for r in roots}) == f.degree


@pytest.mark.parametrize(
    "fs,degree,name",
    [
        ([x**2 - 2], 2, "C2"),
        ([x**3 - 2], 6, "S3"),
        ([x**2 - 2, x**2 - 3], 4, "C2xC2"),
        ([x**4 - 2], 8, "D4"),
        ([x**3 - 3 * x - 1], 3, "C3"),
        ([x**4 + x + 1], 24, "S4"),
        ([x**5 - 2], 20, "F20"),
    ],
    ids=lambda v: str(v) if not isinstance(v, list) else ",".join(map(str, v)),
)
def test_small_splitting_fields(fs, degree, name):
    R = split_aut_grp(fs)
    assert R.field.degree == degree and R.name == name
    _check(R, fs)


def test_linear_input():
    R = split_aut_grp([x - 3])
    assert R.field.degree == 1 and R.name == "trivial"


def test_example1_sextic_is_s3():
    R = split_aut_grp([example1_sextic()])
    assert R.field.degree == 6 and R.name == "S3"
    _check(R, [example1_sextic()])


def test_errors():
    with pytest.raises(NotSquarefree):
        split_aut_grp([x**2 - 2, x**2 - 2])
    with pytest.raises(DegreeBoundExceeded):
        split_aut_grp([x**4 + x + 1], max_degree=12)
    with pytest.raises(BadPrime):
        split_aut_grp([x**2 - 2], p=5)


def test_composition_table_is_group_law():
    R = split_aut_grp([x**4 - 2])
    g = R.field.g
    for i, a in enumerate(R.aut_of_field):
        for j, b in enumerate(R.aut_of_field):
            k = R.table[i][j]
            # sigma_i o sigma_j applied to theta equals sigma_i(h_j)
            assert apply_aut(a.image, b.image, g) == R.aut_of_field[k].image


def test_factor_over_numberfield():
    K = NumberField(x**2 - 2)
    y = Poly.gen(K, "y")
    assert [h.degree for h in factor_over_numberfield(y**2 - 2)] == [1, 1]
    K3 = NumberField(x**3 - 2)
    y = Poly.gen(K3, "y")
    fac = factor_over_numberfield(y**3 - 2)
    assert [h.degree for h in fac] == [1, 2]
    prod = fac[0] * fac[1]
    assert prod == y**3 - 2
    with pytest.raises(TypeError):
        factor_over_numberfield(x**2 - 2)


def test_group_name_fallback():
    # C3 x C3 is not in the catalogue and not cyclic
    perms = sorted({tuple([(a + i) % 3 for i in range(3)] + [3 + (b + i) % 3 for i in range(3)]) for a in range(3) for b in range(3)})
    assert group_name(perms) == "order-9 group"


def test_chebotarev_small():
    est = chebotarev_estimate([x**3 - 2], (5, 400))
    assert est.order_lower_bound == 6
    assert all(6 % k == 0 for _, k in est.samples)
    assert 4 <= est.order_estimate <= 9
    with pytest.raises(ValueError):
        chebotarev_estimate([x**3 - 2], (24, 28))


# -- property: every automorphism satisfies g(h(x)) = 0 mod g -------------------


@st.composite
def small_inputs(draw):
    n = draw(st.integers(1, 2))
    fs = []
    for _ in range(n):
        d = draw(st.integers(1, 4 if n == 1 else 2))
        cs = [draw(st.integers(-6, 6)) for _ in range(d)] + [1]
        fs.append(Poly(QQ, cs, "x"))
    return fs


@given(small_inputs())
def test_automorphisms_are_roots_of_g(fs):
    prod = fs[0]
    for f in fs[1:]:
        prod = prod * f
    assume(prod.is_squarefree())
    R = split_aut_grp(fs)
    _check(R, fs)
    # the group acts faithfully on the roots of the inputs
    assert len(set(R.group)) == len(R.group)
