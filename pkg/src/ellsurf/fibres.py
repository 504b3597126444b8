"""Singular fibres: places, Kodaira types, Euler numbers, local height terms.

All local work happens on the short form y^2 = x^3 + A x + B of the model
(residue characteristic 0 or >= 5), where minimalizing at a place is the pure
scaling u = pi^k.  The chart at infinity is the model from
``weierstrass.infinity_model``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg.factor import factor_fq, factor_q
from .exactalg.fields import FiniteField, RationalField
from .exactalg.poly import Poly, RationalFunction
from .weierstrass import (
    Section,
    SingularSurface,
    WeierstrassModel,
    infinity_model,
    infinity_transporter,
    short_form,
)

INF = math.inf


class UnsupportedCharacteristic(ValueError):
    def __init__(self):
        super().__init__("unsupported residue characteristic")


# ---------------------------------------------------------------------------
# places and valuations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A closed point of P^1: a monic irreducible polynomial or infinity."""

    kind: str
    poly: Poly | None = None

    @classmethod
    def infinity(cls):
        return cls("infinity", None)

    @classmethod
    def finite(cls, poly: Poly):
        if poly.degree < 1:
            raise ValueError("place polynomial must be nonconstant")
        return cls("finite", poly.monic())

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def is_infinity(self):
        return self.kind == "infinity"

    def sort_key(self):
        if self.poly is None:
            return (1, 0, ())
        return (0,) + self.poly.key()

    def __repr__(self):
        return "inf" if self.poly is None else f"({self.poly})"

    def __hash__(self):
        return hash((self.kind, self.poly))


def valuation(f, pi: Poly):
    """pi-adic valuation of a Poly or RationalFunction (INF for zero)."""
    if isinstance(f, RationalFunction):
        if f.is_zero():
            return INF
        return valuation(f.num, pi) - valuation(f.den, pi)
    if f.is_zero():
        return INF
    if pi.degree == 1 and pi.coeffs[0] == 0:
        return f.valuation()
    v = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return v
        f = q
        v += 1


def _factor(f: Poly):
    ring = f.ring
    if isinstance(ring, RationalField):
        return factor_q(f)
    if isinstance(ring, FiniteField):
        return factor_fq(f)
    raise TypeError("places need coefficients in Q or F_q")


def _check_char(E: WeierstrassModel):
    if isinstance(E.ring, FiniteField) and E.ring.p in (2, 3):
        raise UnsupportedCharacteristic()


def bad_places(E: WeierstrassModel):
    """Finite places dividing the discriminant, then infinity if singular there."""
    _check_char(E)
    delta = E.invariants().delta
    if delta.is_zero():
        raise SingularSurface()
    out = [Place.finite(g) for g, _ in _factor(delta) if g.degree > 0]
    out.sort(key=Place.sort_key)
    Einf = infinity_model(E)
    if Einf.invariants().delta.coeffs[0] == 0:
        out.append(Place.infinity())
    return out


# ---------------------------------------------------------------------------
# Kodaira classification
# ---------------------------------------------------------------------------

# symbol -> (m_v, component group invariants) for the fixed types
_FIXED = {
    "II": (1, ()),
    "III": (2, (2,)),
    "IV": (3, (3,)),
    "IV*": (7, (3,)),
    "III*": (8, (2,)),
    "II*": (9, ()),
}


@dataclass
class KodairaFibre:
    place: Place
    symbol: str
    n: int
    v_c4: float
    v_c6: float
    v_delta: int
    m_v: int
    e_v: int
    component_group: tuple
    k_min: int = 0
    chart: str = "t"
    notes: dict = field(default_factory=dict)

    @property
    def additive(self) -> bool:
        return not self.symbol.startswith("I") or self.symbol.endswith("*")

    @property
    def multiplicative(self) -> bool:
        return self.symbol.startswith("I") and not self.symbol.endswith("*") and self.n > 0

    def to_dict(self):
        def enc(v):
            return "inf" if v == INF else int(v)

        return {
            "place": repr(self.place),
            "place_degree": self.place.degree,
            "symbol": self.symbol,
            "v_c4": enc(self.v_c4),
            "v_c6": enc(self.v_c6),
            "v_delta": self.v_delta,
            "m_v": self.m_v,
            "e_v": self.e_v,
            "component_group": list(self.component_group),
            "minimalizing_exponent": self.k_min,
        }


def classify_valuations(vc4, vc6, vd):
    """Kodaira symbol, n, m_v, e_v, group and k from valuations (char != 2, 3)."""
    k = int(min(vc4 // 4 if vc4 != INF else INF, vc6 // 6 if vc6 != INF else INF, vd // 12))
    vc4 = vc4 - 4 * k if vc4 != INF else INF
    vc6 = vc6 - 6 * k if vc6 != INF else INF
    vd = vd - 12 * k
    if vd == 0:
        return "I0", 0, 1, 0, (), k, vc4, vc6, vd
    if vc4 == 0:
        n = vd
        return f"I{n}", n, n, n, (n,), k, vc4, vc6, vd
    if vd > 6 and vc4 == 2 and vc6 == 3:
        # potentially multiplicative; must precede IV*, III*, II* which share vd
        n = vd - 6
        grp = (2, 2) if n % 2 == 0 else (4,)
        return f"I{n}*", n, 5 + n, 6 + n, grp, k, vc4, vc6, vd
    table = {2: "II", 3: "III", 4: "IV", 8: "IV*", 9: "III*", 10: "II*"}
    if vd in table:
        sym = table[vd]
        m, grp = _FIXED[sym]
        return sym, 0, m, m + 1, grp, k, vc4, vc6, vd
    if vd >= 6:
        n = vd - 6
        if n > 0 and not (vc4 == 2 and vc6 == 3):
            raise ValueError("valuation triple outside the Kodaira table")
        grp = (2, 2) if n % 2 == 0 else (4,)
        return f"I{n}*", n, 5 + n, 6 + n, grp, k, vc4, vc6, vd
    raise ValueError("valuation triple outside the Kodaira table")


def _chart(E: WeierstrassModel, place: Place):
    """(short model on the relevant chart, uniformizer, transporter from E)."""
    if place.is_infinity():
        Einf = infinity_model(E)
        T0 = infinity_transporter(E)
        S, T1 = short_form(Einf)
        return S, Poly.gen(E.ring, "s"), (lambda P: T1(T0(P)))
    S, T1 = short_form(E)
    return S, place.poly, T1


def kodaira_type(E: WeierstrassModel, place: Place) -> KodairaFibre:
    _check_char(E)
    S, pi, _ = _chart(E, place)
    inv = S.invariants()
    vc4 = valuation(inv.c4, pi)
    vc6 = valuation(inv.c6, pi)
    vd = valuation(inv.delta, pi)
    if vd == INF:
        raise SingularSurface()
    sym, n, m, e, grp, k, c4m, c6m, dm = classify_valuations(vc4, vc6, vd)
    return KodairaFibre(
        place, sym, n, c4m, c6m, int(dm), m, e, grp, k, "s" if place.is_infinity() else E.var
    )


def fibre_inventory(E: WeierstrassModel):
    return [kodaira_type(E, v) for v in bad_places(E)]


def euler_data(E: WeierstrassModel, fibres=None):
    """(e, b2, ok) with e = sum of deg(v) e_v; raises if e != 12 chi."""
    fibres = fibres if fibres is not None else fibre_inventory(E)
    e = sum(F.place.degree * F.e_v for F in fibres)
    if e != 12 * E.chi:
        raise ValueError("fibre inventory inconsistent")
    return e, e - 2, True


def fibre_sum(fibres) -> int:
    """Sum over geometric points of (m_v - 1)."""
    return sum(F.place.degree * (F.m_v - 1) for F in fibres)


def shioda_tate_rank(E: WeierstrassModel, picard: int | None = None, fibres=None) -> int:
    fibres = fibres if fibres is not None else fibre_inventory(E)
    if picard is None:
        if E.chi != 1:
            raise ValueError("Picard number required for chi > 1")
        picard = 10
    r = picard - 2 - fibre_sum(fibres)
    if r < 0:
        raise ValueError("fibre data inconsistent")
    return r


def fibre_symbols(fibres):
    """Multiset of (symbol, place degree) used to compare inventories."""
    return sorted((F.symbol, F.place.degree) for F in fibres)


# ---------------------------------------------------------------------------
# local height contributions
# ---------------------------------------------------------------------------


def _contr_single(S: WeierstrassModel, F: KodairaFibre, pi: Poly, P: Section) -> Fraction:
    if P.is_zero():
        return Fraction(0)
    k = F.k_min
    x, y = P.x, P.y
    if valuation(x, pi) < 2 * k:
        return Fraction(0)  # meets the zero section locally: identity component
    A, B = S.a4, S.a6
    v2 = valuation(y * 2, pi) - 3 * k
    vfx = valuation(x * x * 3 + A, pi) - 4 * k
    if v2 == 0 or vfx == 0:
        return Fraction(0)
    if F.symbol == "I0":
        return Fraction(0)
    if F.multiplicative:
        N = F.n
        i = min(v2, Fraction(N, 2))
        return Fraction(i) * (N - Fraction(i)) / N
    psi3 = x**4 * 3 + x * x * A * 6 + x * B * 12 - A * A
    v3 = valuation(psi3, pi) - 8 * k
    if v3 >= 3 * v2:
        return Fraction(2 * int(v2), 3)
    return Fraction(int(v3), 4)


def local_contribution(E: WeierstrassModel, F: KodairaFibre, P: Section, Q: Section | None = None) -> Fraction:
    """contr_v(P), or contr_v(P, Q) by polarization when Q is given."""
    from .weierstrass import sub

    S, pi, T = _chart(E, F.place)
    cP = _contr_single(S, F, pi, T(P))
    if Q is None:
        return cP
    cQ = _contr_single(S, F, pi, T(Q))
    cD = _contr_single(S, F, pi, T(sub(E, P, Q)))
    return (cP + cQ - cD) / 2


def zero_intersection(E: WeierstrassModel, P: Section, fibres=None) -> Fraction:
    """(P.O): poles of x on the minimal model, counted with place degree / 2."""
    if P.is_zero():
        raise ValueError("(O.O) is not defined here")
    fibres = fibres if fibres is not None else fibre_inventory(E)
    kmin = {F.place: F.k_min for F in fibres}
    total = Fraction(0)
    places = {Place.finite(g) for g, _ in _factor(P.x.den) if g.degree > 0} if P.x.den.degree > 0 else set()
    places |= {F.place for F in fibres if not F.place.is_infinity()}
    for v in places:
        k = kmin.get(v, 0)
        vx = valuation(P.x, v.poly) - 2 * k
        if vx < 0:
            total += Fraction(-vx * v.degree, 2)
    # infinity
    inf = Place.infinity()
    S, pi, T = _chart(E, inf)
    k = kmin.get(inf, 0)
    vx = valuation(T(P).x, pi) - 2 * k
    if vx < 0:
        total += Fraction(-vx, 2)
    return total


# ---------------------------------------------------------------------------
# Mordell-Weil classification for rational surfaces
# ---------------------------------------------------------------------------

_MW_ROWS = {
    (): 8,
    (2,): 4,
    (3,): 2,
    (2, 2): 2,
    (4,): 1,
    (5,): 0,
    (6,): 0,
    (3, 3): 0,
    (2, 4): 0,
}


def mw_shape_check(rank: int, torsion=()) -> bool:
    """Whether Z^rank + torsion occurs on a rational elliptic surface.

    ``torsion`` is a tuple of invariant factors d1 | d2 | ... (trivial = ()).
    """
    tors = tuple(sorted(d for d in torsion if d != 1))
    bound = _MW_ROWS.get(tors)
    return bound is not None and 0 <= rank <= bound
