import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.appkit import (
    FIXTURES,
    SUBSURFACES,
    ParseError,
    ResultCache,
    SchemaError,
    ShapeMismatch,
    lift_to_e68,
    lmfdb_lookup,
    parse_equation,
    subsurface,
)
from ellsurf.appkit.cli import main
from ellsurf.appkit.e68 import _fifth_root, block_search
from ellsurf.appkit.parser import format_model, parse_polynomial
from ellsurf.appkit.serialize import (
    dumps,
    section_from_json,
    section_to_json,
    surface_from_json,
    surface_to_json,
)
from ellsurf.exactalg import GF, QQ, Poly
from ellsurf.weierstrass import Section, WeierstrassModel, multiply

t = Poly.gen(QQ)

# -- parser -------------------------------------------------------------------


def test_parse_examples():
    assert parse_equation("y^2 = x^3 + t^4 + t^3").model.a6 == t**4 + t**3
    s = parse_equation("y^2 = x^3 + t^360 + 1")
    assert s.delsarte_rows == ((0, 0, 2, 1), (0, 3, 0, 0), (360, 0, 0, 3), (0, 0, 0, 3))
    s = parse_equation("y^2 = x^3 + t^5 + t^-5")
    assert s.model.a6 == t * (t**10 + 1) and s.model.chi == 2 and s.transform.get("cleared")


def test_parse_normalizes_leading_coefficients():
    s = parse_equation("2*y^2 = 2*x^3 + 4*t")
    assert s.model.a6 == t * 2
    s = parse_equation("y^2 = 4*x^3 + t")
    assert s.transform == {"x_scale": "4"} and s.model.a6 == t * 16
    with pytest.raises(ParseError, match="not an elliptic surface"):
        parse_equation("y^2 = x^3 + 1")
    with pytest.raises(ParseError, match="not an elliptic surface"):
        parse_equation("y^2 = x^3")


@pytest.mark.parametrize(
    "text,pos",
    [
        ("y^2 = x^3 + $", 12),
        ("y^2 = x^3 + (t", 14),
        ("y^2 + x^3", 9),
        ("y^2 = x^4 + t", 0),
        ("y^3 = x^3 + 1", 0),
    ],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_equation(text)
    assert exc.value.pos == pos and "position" in str(exc.value)


def test_parse_polynomial():
    assert parse_polynomial("x^3-x^2-3*x+1") == Poly(QQ, [1, -3, -1, 1], "x")
    assert parse_polynomial("t^2 + 1") == Poly(QQ, [1, 0, 1], "x")
    with pytest.raises(ParseError):
        parse_polynomial("x*t + 1")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_roundtrip(name):
    E = FIXTURES[name].model()
    assert parse_equation(format_model(E)).model == E
    assert surface_from_json(json.loads(dumps(surface_to_json(E)))) == E


coef = st.integers(-7, 7)


@given(
    st.lists(st.lists(coef, max_size=3), min_size=5, max_size=5),
    st.sampled_from([0, 5, 7, 101]),
)
def test_model_roundtrip_property(cs, p):
    F = QQ if p == 0 else GF(p)
    try:
        E = WeierstrassModel(F, *[Poly(F, c, "t") for c in cs])
    except ValueError:
        return
    assert surface_from_json(json.loads(dumps(surface_to_json(E)))) == E
    if p == 0:
        assert parse_equation(format_model(E)).model == E


# -- serialization ----------------------------------------------------------------


def test_section_roundtrip():
    E = WeierstrassModel.short(QQ, 0, t**3 + t**2)
    P = Section(-t, t)
    Q = multiply(E, 3, P)
    for S in (P, Q, Section.zero()):
        assert section_from_json(json.loads(dumps(section_to_json(S)))) == S
    F = GF(5, 2)
    z = F.gen()
    s = Poly.gen(F)
    R = Section(s * z + 1, s**2 * z, 2)
    back = section_from_json(json.loads(dumps(section_to_json(R))))
    assert back == R and back.field_degree == 2


def test_schema_errors():
    with pytest.raises(SchemaError):
        surface_from_json({"schema": "ellsurf/0", "field": {"type": "Q"}, "coefficients": [[]] * 5})
    with pytest.raises(SchemaError):
        surface_from_json({"field": {"type": "Z"}, "coefficients": [[]] * 5})
    with pytest.raises(SchemaError):
        surface_from_json({"field": {"type": "Q"}, "coefficients": [[1]]})


# -- lifting -------------------------------------------------------------------


def test_lift_patterns():
    assert subsurface("t5+1").exponents() == ((144, 72, 0), (216, 144, 72, 0))
    assert subsurface("t2(t+1)").exponents() == ((480, 120, -240), (720, 360, 0, -360))
    assert sum(S.rank for S in SUBSURFACES) == 68


def test_lift_zero_section():
    L = lift_to_e68("t5+1", Section.zero())
    assert L.zero and L.satisfies_e68() and L.to_section().is_zero()


def test_lift_shape_mismatch():
    s = Poly.gen(GF(11))
    with pytest.raises(ShapeMismatch, match="T\\^144"):
        lift_to_e68("t5+1", Section(s**3, s**4))


def test_lift_f11_section_of_t5_plus_1():
    S = subsurface("t5+1")
    found = block_search(S, 11)
    secs = [P for P in found if not P.is_zero()]
    assert len(secs) == 240
    for P in secs[:12]:
        L = lift_to_e68(S, P)
        assert L.satisfies_e68()
        xe, ye = L.exponents()
        assert set(xe) <= {144, 72, 0} and set(ye) <= {216, 144, 72, 0}


@pytest.mark.parametrize("key", ["t2(t+1)", "t(t4+1)", "k3"])
def test_lift_other_blocks(key):
    S = subsurface(key)
    found = block_search(S, 11)
    K = found.model.ring
    zeta = _fifth_root(K) if S.is_k3 else None
    secs = [P for P in found if not P.is_zero()][:6]
    assert secs
    for P in secs:
        assert lift_to_e68(S, P, zeta=zeta).satisfies_e68()


def test_lift_wrong_zeta():
    S = subsurface("k3")
    found = block_search(S, 11)
    P = next(P for P in found if not P.is_zero())
    with pytest.raises(ValueError):
        lift_to_e68(S, P, zeta=found.model.ring(2))


# -- cache ---------------------------------------------------------------------


def test_cache_roundtrip(tmp_path):
    c = ResultCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return dumps({"a": 1, "b": [1, 2]})

    t1, hit1 = c.fetch({"k": 1}, compute)
    t2, hit2 = c.fetch({"k": 1}, compute)
    assert (hit1, hit2) == (False, True) and t1 == t2 and len(calls) == 1
    assert not list(tmp_path.rglob(".tmp-*"))
    off = ResultCache(tmp_path, enabled=False)
    assert off.get({"k": 1}) is None


def test_cli_cache_hit_is_byte_identical(tmp_path, monkeypatch):
    monkeypatch.setenv("ELLSURF_CACHE_DIR", str(tmp_path / "c"))
    argv = ["analyze", "y^2 = x^3 + t^4 + t^2", "--prime", "auto", "--json"]
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        assert main(argv + ["--out", str(out)]) == 0
        outs.append(out.read_bytes())
    cold = tmp_path / "cold.json"
    assert main(argv + ["--out", str(cold), "--no-cache"]) == 0
    assert outs[0] == outs[1] == cold.read_bytes()


# -- lmfdb ---------------------------------------------------------------------


def test_lmfdb_with_injected_fetch():
    seen = []

    def fetch(url):
        seen.append(url)
        body = {"data": [{"label": "2.0.3.1", "degree": 2, "galt": 1}]}
        return json.dumps(body).encode()

    r = lmfdb_lookup(Poly(QQ, [1, -1, 1], "x"), fetch=fetch)
    assert r.status == "found" and r.label == "2.0.3.1" and r.galois_label == "2T1"
    assert "coeffs=li1%2C-1%2C1" in seen[0]


def test_lmfdb_offline_and_not_found():
    assert lmfdb_lookup(Poly(QQ, [1, -1, 1], "x")).status == "unavailable"
    r = lmfdb_lookup([5, 0, 0, 1], fetch=lambda url: b'{"data": []}')
    assert r.status == "not found" and r.degree == 3


def test_lmfdb_failures_degrade():
    def broken(url):
        raise OSError("no route")

    assert lmfdb_lookup([1, 0, 1], fetch=broken).status == "unavailable"
    assert lmfdb_lookup([1, 0, 1], fetch=lambda url: b"not json").status == "unavailable"
    assert lmfdb_lookup([Fraction(1, 2), 1], fetch=lambda url: b"{}").status == "unavailable"


# -- CLI -------------------------------------------------------------------------


def test_cli_exit_codes(capsys):
    assert main(["analyze", "y^2 = x^3 + t^4 + t^2", "--expect-rank", "4"]) == 0
    assert main(["analyze", "y^2 = x^3 + t^4 + t^2", "--expect-rank", "3"]) == 1
    assert main(["analyze", "y^2 = x^4"]) == 2
    assert main(["lift", "no-such-block"]) == 2
    assert main(["delsarte", "y^2 = x^3 + t^5 + t^-5", "--expect-rank", "16"]) == 0
    assert main(["split", "x^3-2", "--expect-degree", "6"]) == 0
    assert main(["chebotarev", "x^3-2", "--primes", "5:300", "--expect-order", "6"]) == 0
    assert main(["analyze", "y^2 = x^3 + t^5 + 1", "--field", "13"]) == 0
    capsys.readouterr()


def test_cli_json_output(capsys):
    assert main(["analyze", "y^2 = x^3 + t^4 + t^3", "--json"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["schema"] == "ellsurf/1" and res["rank"]["value"] == 2
    assert sorted(f["symbol"] for f in res["fibres"]) == ["I0*", "II", "IV"]


def test_cli_lift(capsys):
    assert main(["lift", "t5+1", "--prime", "11", "--json"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert all(item["on_e68"] for item in res["lifts"]) and len(res["lifts"]) == 5
