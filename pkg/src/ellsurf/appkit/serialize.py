"""Versioned JSON encoding of surfaces, fibres, sections and reports.

Layout (schema "ellsurf/1"):

    surface  {field: {type: "Q" | "Fp", p, k, modulus}, coefficients: [a1, a2, a3, a4, a6], chi}
    fibre    {place, symbol, m, e, valuations: [v_c4, v_c6, v_delta]}
    section  {x: [...], y: [...], degree} or {zero: true}
    report   {checks: [{name, expected, got, status}]}

Coefficient lists are ascending in t.  Rationals are ints or "p/q" strings,
F_p elements ints and F_{p^k} elements lists of k ints.  ``dumps`` gives the
canonical text (sorted keys, no whitespace) used for hashing.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..exactalg import GF, QQ, FiniteField, Poly, RationalField
from ..weierstrass import Section, WeierstrassModel

SCHEMA = "ellsurf/1"


class SchemaError(ValueError):
    pass


def field_to_json(F) -> dict:
    if isinstance(F, RationalField):
        return {"type": "Q"}
    if isinstance(F, FiniteField):
        d = {"type": "Fp", "p": F.p, "k": F.k}
        if F.k > 1:
            d["modulus"] = list(F.modulus)
        return d
    raise TypeError(f"cannot serialize coefficient field {F!r}")


def field_from_json(d: dict):
    kind = d.get("type")
    if kind == "Q":
        return QQ
    if kind == "Fp":
        k = int(d.get("k", 1))
        return GF(int(d["p"]), k, tuple(d["modulus"]) if k > 1 else None)
    raise SchemaError(f"unknown field type {kind!r}")


def scalar_to_json(F, c):
    if isinstance(F, RationalField):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if F.k == 1:
        return int(c)
    return list(F.key(c))


def scalar_from_json(F, v):
    if isinstance(F, RationalField):
        return Fraction(v) if isinstance(v, str) else Fraction(int(v))
    if isinstance(v, list):
        return F.from_key(v)
    return F(int(v))


def poly_to_json(f: Poly) -> list:
    return [scalar_to_json(f.ring, c) for c in f.coeffs]


def poly_from_json(F, v, var="t") -> Poly:
    return Poly(F, [scalar_from_json(F, c) for c in v], var)


def surface_to_json(E: WeierstrassModel) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "surface",
        "field": field_to_json(E.ring),
        "coefficients": [poly_to_json(c) for c in E.a],
        "chi": E.chi,
    }


def surface_from_json(d: dict) -> WeierstrassModel:
    _check(d, "surface")
    F = field_from_json(d["field"])
    cs = d["coefficients"]
    if len(cs) != 5:
        raise SchemaError("need five coefficient lists a1, a2, a3, a4, a6")
    return WeierstrassModel(F, *(poly_from_json(F, c) for c in cs), chi=d.get("chi"))


def fibre_to_json(Fb) -> dict:
    d = Fb.to_dict()
    return {
        "place": d["place"],
        "place_degree": d["place_degree"],
        "symbol": d["symbol"],
        "m": d["m_v"],
        "e": d["e_v"],
        "valuations": [d["v_c4"], d["v_c6"], d["v_delta"]],
        "component_group": d["component_group"],
    }


def section_to_json(P: Section) -> dict:
    if P.is_zero():
        return {"zero": True}
    if not P.is_integral():
        F = P.x.ring
        return {
            "x": poly_to_json(P.x.num),
            "x_den": poly_to_json(P.x.den),
            "y": poly_to_json(P.y.num),
            "y_den": poly_to_json(P.y.den),
            "degree": P.field_degree,
            "field": field_to_json(F),
        }
    return {"x": poly_to_json(P.xp), "y": poly_to_json(P.yp), "degree": P.field_degree, "field": field_to_json(P.xp.ring)}


def section_from_json(d: dict, F=None, var="t") -> Section:
    if d.get("zero"):
        return Section.zero()
    F = F or field_from_json(d["field"])
    x = poly_from_json(F, d["x"], var)
    y = poly_from_json(F, d["y"], var)
    if "x_den" in d:
        from ..exactalg import RationalFunction

        x = RationalFunction(x, poly_from_json(F, d["x_den"], var))
        y = RationalFunction(y, poly_from_json(F, d["y_den"], var))
    return Section(x, y, int(d.get("degree", 1)))


def report_to_json(report) -> dict:
    d = report.to_dict()
    d.update({"schema": SCHEMA, "kind": "report", "passed": report.passed})
    return d


def _check(d, kind):
    if d.get("schema", SCHEMA) != SCHEMA:
        raise SchemaError(f"unsupported schema {d.get('schema')!r}")
    if d.get("kind", kind) != kind:
        raise SchemaError(f"expected a {kind}, got {d.get('kind')!r}")


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
