"""Weierstrass models over k(t), the group law on sections, and model changes.

A model is y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in k[t].
chi is the smallest positive integer with deg a_i <= i * chi; chi = 1 gives a
rational elliptic surface and chi = 2 a K3 surface.

Sections carry rational-function coordinates so that the group law is closed;
integral sections are those with polynomial coordinates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import flint
import gmpy2

from .exactalg.factor import NOT_A_SQUARE, poly_sqrt
from .exactalg.fields import QQ, FiniteField, RationalField
from .exactalg.poly import Poly, RationalFunction


class SingularSurface(ValueError):
    def __init__(self, msg="singular surface"):
        super().__init__(msg)


class ExtensionRequired(ValueError):
    """A transport needs a radical not in the coefficient field.

    ``minpoly`` is the minimal polynomial (over the base field) of the
    missing radical, when it is a constant.
    """

    def __init__(self, minpoly=None, msg="extension required"):
        super().__init__(msg)
        self.minpoly = minpoly


def _rf(ring, c, var="t"):
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, Poly):
        return RationalFunction(c)
    return RationalFunction(Poly(ring, [c], var))


def _as_poly(ring, c, var="t"):
    if isinstance(c, Poly):
        return c
    if isinstance(c, RationalFunction):
        return c.as_poly()
    return Poly(ring, [c], var)


# ---------------------------------------------------------------------------
# models and invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Invariants:
    b2: Poly
    b4: Poly
    b6: Poly
    b8: Poly
    c4: Poly
    c6: Poly
    delta: Poly
    j: RationalFunction


class WeierstrassModel:
    """Generic fibre of an elliptic surface over k(t)."""

    def __init__(self, ring, a1=0, a2=0, a3=0, a4=0, a6=0, chi=None, var="t"):
        self.ring = ring
        self.var = var
        self.a = tuple(_as_poly(ring, c, var).change_var(var) for c in (a1, a2, a3, a4, a6))
        inv = self.invariants()
        if inv.delta.is_zero():
            raise SingularSurface()
        if all(c.degree <= 0 for c in self.a):
            raise ValueError("constant surface")
        need = 1
        for w, c in zip((1, 2, 3, 4, 6), self.a):
            if c.degree > 0:
                need = max(need, -(-c.degree // w))
        if chi is None:
            chi = need
        elif chi < need:
            raise ValueError(f"degree bound violated for chi = {chi}")
        self.chi = chi
        self.isotrivial = inv.j.num.degree <= 0 and inv.j.den.degree == 0

    # convenient accessors
    a1 = property(lambda self: self.a[0])
    a2 = property(lambda self: self.a[1])
    a3 = property(lambda self: self.a[2])
    a4 = property(lambda self: self.a[3])
    a6 = property(lambda self: self.a[4])

    @classmethod
    def short(cls, ring, a4, a6, chi=None, var="t"):
        return cls(ring, 0, 0, 0, a4, a6, chi=chi, var=var)

    def invariants(self) -> Invariants:
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - b4 * 24
        c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
        delta = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
        j = RationalFunction(c4 * c4 * c4, delta) if not delta.is_zero() else None
        return Invariants(b2, b4, b6, b8, c4, c6, delta, j)

    def is_short_j0(self) -> bool:
        """y^2 = x^3 + B form."""
        return all(c.is_zero() for c in self.a[:4])

    def extend(self, ring, hom=None) -> "WeierstrassModel":
        """Same surface over a larger coefficient field."""
        if ring == self.ring and hom is None:
            return self
        fn = hom or ring
        return WeierstrassModel(ring, *(c.map(ring, fn) for c in self.a), chi=self.chi, var=self.var)

    def key(self):
        return (repr(self.ring), self.chi, tuple(c.key() for c in self.a))

    def __eq__(self, other):
        return (
            isinstance(other, WeierstrassModel)
            and self.ring == other.ring
            and self.a == other.a
            and self.chi == other.chi
        )

    def __hash__(self):
        return hash(self.a)

    def __repr__(self):
        names = ("a1", "a2", "a3", "a4", "a6")
        parts = [f"{n}={c}" for n, c in zip(names, self.a) if not c.is_zero()]
        return f"WeierstrassModel({self.ring}, {', '.join(parts)}, chi={self.chi})"

    def equation_str(self) -> str:
        a1, a2, a3, a4, a6 = self.a
        lhs = "y^2"
        if not a1.is_zero():
            lhs += f" + ({a1})*x*y"
        if not a3.is_zero():
            lhs += f" + ({a3})*y"
        rhs = "x^3"
        if not a2.is_zero():
            rhs += f" + ({a2})*x^2"
        if not a4.is_zero():
            rhs += f" + ({a4})*x"
        if not a6.is_zero():
            rhs += f" + ({a6})"
        return f"{lhs} = {rhs}"


def invariants(E: WeierstrassModel) -> Invariants:
    return E.invariants()


# ---------------------------------------------------------------------------
# sections and the group law
# ---------------------------------------------------------------------------


class Section:
    """A point of E(K(t)); ``x is None`` marks the zero section."""

    __slots__ = ("x", "y", "field_degree")

    def __init__(self, x=None, y=None, field_degree: int = 1):
        if (x is None) != (y is None):
            raise ValueError("both coordinates or neither")
        self.x = x if x is None or isinstance(x, RationalFunction) else RationalFunction(x)
        self.y = y if y is None or isinstance(y, RationalFunction) else RationalFunction(y)
        self.field_degree = field_degree

    @classmethod
    def zero(cls):
        return cls()

    @property
    def kind(self):
        return "zero" if self.x is None else "affine"

    def is_zero(self):
        return self.x is None

    def is_integral(self):
        return self.x is None or (self.x.is_polynomial() and self.y.is_polynomial())

    @property
    def xp(self) -> Poly:
        return self.x.as_poly()

    @property
    def yp(self) -> Poly:
        return self.y.as_poly()

    def key(self):
        if self.x is None:
            return ()
        return (self.x.key(), self.y.key())

    def map(self, ring, fn=None):
        if self.x is None:
            return self
        return Section(self.x.map(ring, fn), self.y.map(ring, fn), self.field_degree)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        if self.x is None or other.x is None:
            return self.x is None and other.x is None
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.x}, {self.y})"


def on_curve(E: WeierstrassModel, P: Section) -> bool:
    if P.is_zero():
        return True
    a1, a2, a3, a4, a6 = E.a
    x, y = P.x, P.y
    lhs = y * y + x * y * a1 + y * a3
    rhs = x * x * x + x * x * a2 + x * a4 + a6
    return (lhs - rhs).is_zero()


def negate(E: WeierstrassModel, P: Section) -> Section:
    if P.is_zero():
        return P
    return Section(P.x, -P.y - P.x * E.a1 - E.a3, P.field_degree)


def add(E: WeierstrassModel, P: Section, Q: Section) -> Section:
    """Chord-tangent addition over the function field."""
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    a1, a2, a3, a4, a6 = E.a
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if (y1 + y2 + x2 * a1 + a3).is_zero():
            return Section.zero()
        den = y1 * 2 + x1 * a1 + a3
        lam = (x1 * x1 * 3 + x1 * a2 * 2 + a4 - y1 * a1) / den
        nu = (-(x1 * x1 * x1) + x1 * a4 + a6 * 2 - y1 * a3) / den
    else:
        dx = x2 - x1
        lam = (y2 - y1) / dx
        nu = (y1 * x2 - y2 * x1) / dx
    x3 = lam * lam + lam * a1 - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Section(x3, y3, max(P.field_degree, Q.field_degree))


def sub(E, P, Q):
    return add(E, P, negate(E, Q))


def multiply(E: WeierstrassModel, n: int, P: Section) -> Section:
    if n < 0:
        return multiply(E, -n, negate(E, P))
    result = Section.zero()
    base = P
    while n:
        if n & 1:
            result = add(E, result, base)
        n >>= 1
        if n:
            base = add(E, base, base)
    return result


def torsion_order(E: WeierstrassModel, P: Section, bound: int = 12):
    """Order of P if it is at most ``bound``, else None."""
    Q = P
    for k in range(1, bound + 1):
        if Q.is_zero():
            return k
        Q = add(E, Q, P)
    return None


# ---------------------------------------------------------------------------
# coordinate changes
# ---------------------------------------------------------------------------


class Transporter:
    """Section map attached to a change of model.

    ``forward`` maps sections of the source model to the target model;
    ``backward`` is its inverse when available.
    """

    def __init__(self, forward, backward=None, source=None, target=None):
        self._fwd, self._bwd = forward, backward
        self.source, self.target = source, target

    def __call__(self, P: Section) -> Section:
        return self._fwd(P)

    def inverse(self, P: Section) -> Section:
        if self._bwd is None:
            raise ValueError("transport not invertible")
        return self._bwd(P)


def _apply_urs(a, u, r, s, w):
    """New coefficients for x = u^2 x' + r, y = u^3 y' + u^2 s x' + w."""
    a1, a2, a3, a4, a6 = a
    n1 = (a1 + s * 2) / u
    n2 = (a2 - s * a1 + r * 3 - s * s) / u**2
    n3 = (a3 + r * a1 + w * 2) / u**3
    n4 = (a4 - s * a3 + r * a2 * 2 - (w + r * s) * a1 + r * r * 3 - s * w * 2) / u**4
    n6 = (a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1) / u**6
    return n1, n2, n3, n4, n6


def transform(E: WeierstrassModel, u, r=0, s=0, w=0, chi=None):
    """Change of variables x = u^2 x' + r, y = u^3 y' + u^2 s x' + w.

    u, r, s, w may be scalars, polynomials or rational functions in t; the
    resulting coefficients must be polynomials.  Returns (model, transporter).
    """
    ring, var = E.ring, E.var
    U, R, S, W = (_rf(ring, c, var) for c in (u, r, s, w))
    if U.is_zero():
        raise ValueError("u = 0")
    A = tuple(RationalFunction(c) for c in E.a)
    new = _apply_urs(A, U, R, S, W)
    if not all(c.is_polynomial() for c in new):
        raise ValueError("transformed model has non-polynomial coefficients")
    F = WeierstrassModel(ring, *(c.as_poly() for c in new), chi=chi, var=var)

    def fwd(P):
        if P.is_zero():
            return P
        xp = (P.x - R) / U**2
        yp = (P.y - S * (P.x - R) - W) / U**3
        return Section(xp, yp, P.field_degree)

    def bwd(P):
        if P.is_zero():
            return P
        x = P.x * U**2 + R
        y = P.y * U**3 + P.x * S * U**2 + W
        return Section(x, y, P.field_degree)

    return F, Transporter(fwd, bwd, E, F)


def complete_square(E: WeierstrassModel):
    """Transform to a1 = a3 = 0 (p >= 5 or characteristic 0)."""
    half = E.ring(1) / E.ring(2)
    return transform(E, 1, 0, -(RationalFunction(E.a1) * half), -(RationalFunction(E.a3) * half))


def short_form(E: WeierstrassModel):
    """Transform to y^2 = x^3 + A x + B."""
    F, T1 = complete_square(E)
    third = E.ring(1) / E.ring(3)
    G, T2 = transform(F, 1, -(RationalFunction(F.a2) * third), 0, 0)
    return G, Transporter(lambda P: T2(T1(P)), lambda P: T1.inverse(T2.inverse(P)), E, G)


def _laurent_shift(den: Poly):
    """If den = t^k return k, else None."""
    if den.degree >= 0 and all(c == 0 for c in den.coeffs[:-1]):
        return den.degree
    return None


def clear_denominators(ring, coeffs, var="t", chi=None):
    """Model from rational-function coefficients by scaling x, y.

    With u = 1/L, a_i becomes L^i a_i.  For Laurent coefficients L is the
    smallest power of t that works.  Returns (model, transporter) where the
    transporter takes sections of the rational-coefficient curve.
    """
    A = [_rf(ring, c, var) for c in coeffs]
    weights = (1, 2, 3, 4, 6)
    shifts = [_laurent_shift(c.den) for c in A]
    t = Poly.gen(ring, var)
    if all(s is not None for s in shifts):
        k = max(-(-s // w) for s, w in zip(shifts, weights))
        L = t**k
    else:
        L = Poly(ring, [1], var)
        for c in A:
            L = (L * c.den) // L.gcd(c.den)
    u = RationalFunction(Poly(ring, [1], var), L)
    new = _apply_urs(tuple(A), u, _rf(ring, 0, var), _rf(ring, 0, var), _rf(ring, 0, var))
    F = WeierstrassModel(ring, *(c.as_poly() for c in new), chi=chi, var=var)

    def fwd(P):
        if P.is_zero():
            return P
        return Section(P.x / u**2, P.y / u**3, P.field_degree)

    def bwd(P):
        if P.is_zero():
            return P
        return Section(P.x * u**2, P.y * u**3, P.field_degree)

    return F, Transporter(fwd, bwd, None, F)


def infinity_model(E: WeierstrassModel, var="s") -> WeierstrassModel:
    """Chart at t = infinity: a_i -> s^(i chi) a_i(1/s)."""
    out = []
    for w, c in zip((1, 2, 3, 4, 6), E.a):
        n = w * E.chi
        if c.degree > n:
            raise ValueError("degree bound violation")
        cs = list(c.coeffs) + [E.ring(0)] * (n + 1 - len(c.coeffs))
        out.append(Poly(E.ring, cs[::-1], var, _raw=True))
    return WeierstrassModel(E.ring, *out, chi=E.chi, var=var)


def infinity_transporter(E: WeierstrassModel, var="s"):
    """Sections of E mapped into the chart returned by infinity_model."""
    chi = E.chi
    s = Poly.gen(E.ring, var)
    inv_s = RationalFunction(Poly(E.ring, [1], var), s)

    def sub(f: RationalFunction):
        return _rf(E.ring, f.num(inv_s), var) / _rf(E.ring, f.den(inv_s), var)

    def fwd(P):
        if P.is_zero():
            return P
        x = sub(P.x) * RationalFunction(s ** (2 * chi))
        y = sub(P.y) * RationalFunction(s ** (3 * chi))
        return Section(x, y, P.field_degree)

    return Transporter(fwd, None, E, None)


def base_change(E: WeierstrassModel, g, var="t", chi=None):
    """Pull back along u -> g(t); g a polynomial or rational function in var.

    Returns (model over k(t) with polynomial coefficients, transporter).
    """
    ring = E.ring
    G = _rf(ring, g, var)
    if G.num.degree <= 0 and G.den.degree == 0:
        raise ValueError("base change needs a nonconstant map")

    def comp(f: Poly) -> RationalFunction:
        acc = _rf(ring, 0, var)
        for c in reversed(f.coeffs):
            acc = acc * G + c
        return acc

    coeffs = [comp(c) for c in E.a]
    F, T = clear_denominators(ring, coeffs, var, chi=chi)

    def fwd(P):
        if P.is_zero():
            return P
        x = comp_rf(P.x)
        y = comp_rf(P.y)
        return T(Section(x, y, P.field_degree))

    def comp_rf(f: RationalFunction):
        return comp(f.num) / comp(f.den)

    return F, Transporter(fwd, None, E, F)


def laurent_compose(f: Poly, g: RationalFunction) -> RationalFunction:
    """f(g) as a rational function (used for u = t + 1/t style substitutions)."""
    acc = _rf(f.ring, 0, g.num.var)
    for c in reversed(f.coeffs):
        acc = acc * g + c
    return acc


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------


def _const_nth_root(ring, c, n):
    """n-th root of a field element in the field, or None."""
    if isinstance(ring, RationalField):
        num, den = c.numerator, c.denominator
        sign = 1
        if num < 0:
            if n % 2 == 0:
                return None
            sign, num = -1, -num
        rn, en = gmpy2.iroot(num, n)
        rd, ed = gmpy2.iroot(den, n)
        if en and ed:
            return QQ(sign * int(rn)) / int(rd)
        return None
    if isinstance(ring, FiniteField):
        if n == 2:
            return ring.sqrt(c)
        if ring.k == 1:
            f = flint.nmod_poly([-int(c)] + [0] * (n - 1) + [1], ring.p)
            rts = sorted(int(r) for r, _ in f.roots())
            return ring(rts[0]) if rts else None
        R = flint.fq_default_poly_ctx(ring.ctx)
        f = R([-c] + [ring(0)] * (n - 1) + [ring(1)])
        rts = sorted((r for r, _ in f.roots()), key=ring.key)
        return rts[0] if rts else None
    raise TypeError("radicals need Q or F_q coefficients")


def poly_nth_root(f: Poly, n: int):
    """Exact n-th root of a polynomial (n = 2 or 3), or NOT_A_SQUARE."""
    if n == 2:
        return poly_sqrt(f)
    ring = f.ring
    if f.is_zero():
        return f
    if f.degree % n:
        return NOT_A_SQUARE
    v = f.valuation()
    if v % n:
        return NOT_A_SQUARE
    lead = _const_nth_root(ring, f.lc, n)
    if lead is None:
        return NOT_A_SQUARE
    # reversed series: f = lc t^D (1 + h(1/t)); root = lead t^(D/n) (1+h)^(1/n)
    D = f.degree
    m = D // n
    rev = [c / f.lc for c in reversed(f.coeffs)]  # rev[0] = 1
    # power series g with g^n = rev, g[0] = 1, to precision m + 1
    g = [ring(0)] * (m + 1)
    g[0] = ring(1)
    inv_n = 1 / ring(n)
    # use g' * rev * ... : solve coefficientwise via n * rev * g' = rev' * g
    for k in range(1, m + 1):
        # coefficient of t^(k-1) in n*rev*g' - rev'*g = 0
        s = ring(0)
        for i in range(1, k):
            ri = rev[k - i] if k - i < len(rev) else ring(0)
            s += ring(n) * i * g[i] * ri
        for i in range(0, k):
            ri = (k - i) * rev[k - i] if k - i < len(rev) else ring(0)
            s -= ri * g[i]
        g[k] = -s * inv_n / k
    root = Poly(ring, [c * lead for c in reversed(g)], f.var, _raw=True)
    if root**n != f:
        return NOT_A_SQUARE
    return root


def _rf_root(ring, d: RationalFunction, n: int):
    a = poly_nth_root(d.num, n)
    b = poly_nth_root(d.den, n)
    if a is NOT_A_SQUARE or b is NOT_A_SQUARE:
        return None
    # fix the scalar: den is monic so its root may carry a unit; normalize
    return RationalFunction(a, b)


def _radical_minpoly(ring, d: RationalFunction, n: int):
    if d.num.degree == 0 and d.den.degree == 0:
        c = d.num.lc
        return Poly(ring, [-c] + [0] * (n - 1) + [1], "z")
    return None


def twist(E: WeierstrassModel, d, transport: bool = True):
    """Twist by d (a nonzero constant or rational function in t).

    For y^2 = x^3 + B the twist is y^2 = x^3 + d B, transported by
    (x, y) -> (d^(1/3) x, d^(1/2) y).  Other models get the quadratic twist
    a_i -> d^(i/2) a_i (after completing the square), transported by
    (x, y) -> (d x, d^(3/2) y).  Returns (model, transporter or None).
    Denominators in d are cleared afterwards.
    """
    ring = E.ring
    D = _rf(ring, d, E.var)
    if D.is_zero():
        raise ValueError("d must be nonzero")
    if E.is_short_j0():
        coeffs = [0, 0, 0, 0, D * E.a6]
        F, T = clear_denominators(ring, coeffs, E.var)
        if not transport:
            return F, None
        a = _rf_root(ring, D, 3)
        b = _rf_root(ring, D, 2)
        if a is None:
            raise ExtensionRequired(_radical_minpoly(ring, D, 3))
        if b is None:
            raise ExtensionRequired(_radical_minpoly(ring, D, 2))
        if not (a**3 == D and b**2 == D):
            raise ExtensionRequired(None)

        def fwd(P):
            if P.is_zero():
                return P
            return T(Section(P.x * a, P.y * b, P.field_degree))

        return F, Transporter(fwd, None, E, F)
    F0, T0 = complete_square(E)
    a1, a2, a3, a4, a6 = (RationalFunction(c) for c in F0.a)
    coeffs = [0, a2 * D, 0, a4 * D**2, a6 * D**3]
    F, T = clear_denominators(ring, coeffs, E.var)
    if not transport:
        return F, None
    b = _rf_root(ring, D, 2)
    if b is None:
        raise ExtensionRequired(_radical_minpoly(ring, D, 2))

    def fwd(P):
        if P.is_zero():
            return P
        Q = T0(P)
        return T(Section(Q.x * D, Q.y * D * b, P.field_degree))

    return F, Transporter(fwd, None, E, F)


def isotrivial_warning(E: WeierstrassModel):
    if E.isotrivial:
        warnings.warn("isotrivial model (constant j-invariant)", stacklevel=2)
