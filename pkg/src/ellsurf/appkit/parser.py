"""Text equations to Weierstrass models.

Grammar (whitespace ignored)::

    equation := expr '=' expr
    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/')? factor)*     # juxtaposition multiplies
    factor   := ('-' | '+') factor | atom ('^' signed_int)?
    atom     := integer | 't' | 'x' | 'y' | '(' expr ')'

Division is only allowed by nonzero constants.  Values are polynomials in
x, y whose coefficients are Laurent polynomials in t, held as
{(i, j): {k: Fraction}} for x^i y^j t^k.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..delsarte import DegenerateDelsarte, DelsarteSurface
from ..exactalg.fields import QQ, FiniteField
from ..exactalg.poly import Poly, RationalFunction
from ..weierstrass import WeierstrassModel, clear_denominators


class ParseError(ValueError):
    def __init__(self, msg, pos, text=""):
        self.pos = pos
        where = f" at position {pos}"
        if text:
            where += f": {text[:pos]}<<{text[pos:pos + 12]}"
        super().__init__(msg + where)


_TOKEN = re.compile(r"\s*(?:(\d+)|([txy])|(\*\*|[-+*/^()=]))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            k = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[k]!r}", k, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("var", m.group(2), start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


# polynomial values ---------------------------------------------------------


def _const(c):
    return {(0, 0): {0: Fraction(c)}} if c else {}


def _add(a, b, sign=1):
    out = {m: dict(cs) for m, cs in a.items()}
    for m, cs in b.items():
        tgt = out.setdefault(m, {})
        for k, c in cs.items():
            v = tgt.get(k, 0) + sign * c
            if v:
                tgt[k] = v
            else:
                tgt.pop(k, None)
        if not tgt:
            out.pop(m)
    return out


def _mul(a, b):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            tgt = out.setdefault((i1 + i2, j1 + j2), {})
            for k1, x1 in c1.items():
                for k2, x2 in c2.items():
                    v = tgt.get(k1 + k2, 0) + x1 * x2
                    if v:
                        tgt[k1 + k2] = v
                    else:
                        tgt.pop(k1 + k2, None)
    return {m: cs for m, cs in out.items() if cs}


def _as_scalar(a):
    if not a:
        return Fraction(0)
    if list(a) == [(0, 0)] and list(a[(0, 0)]) == [0]:
        return a[(0, 0)][0]
    return None


def _is_t_monomial(a):
    if list(a) == [(0, 0)] and len(a[(0, 0)]) == 1:
        (k, c), = a[(0, 0)].items()
        return k, c
    return None


def _pow(a, n, pos, text):
    if n >= 0:
        out = _const(1)
        for _ in range(n):
            out = _mul(out, a)
        return out
    mono = _is_t_monomial(a)
    if mono is None:
        raise ParseError("negative exponent needs a monomial in t", pos, text)
    k, c = mono
    return {(0, 0): {k * n: Fraction(1) / c ** (-n)}}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2], self.text)

    def equation(self):
        lhs = self.expr()
        t = self.peek()
        if t[0] != "op" or t[1] != "=":
            raise ParseError("expected '='", t[2], self.text)
        self.take()
        rhs = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("trailing input", t[2], self.text)
        return lhs, rhs

    def expression_only(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("trailing input", t[2], self.text)
        return e

    def expr(self):
        acc = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                acc = _add(acc, self.term(), 1 if t[1] == "+" else -1)
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = _mul(acc, self.factor())
            elif t[0] == "op" and t[1] == "/":
                self.take()
                pos = self.peek()[2]
                d = self.factor()
                s = _as_scalar(d)
                if s is None or s == 0:
                    mono = _is_t_monomial(d)
                    if mono is None or mono[1] == 0:
                        raise ParseError("division only by nonzero constants or monomials in t", pos, self.text)
                    acc = _mul(acc, _pow(d, -1, pos, self.text))
                else:
                    acc = _mul(acc, _const(1 / s))
            elif t[0] in ("int", "var") or (t[0] == "op" and t[1] == "("):
                acc = _mul(acc, self.factor())
            else:
                return acc

    def factor(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            f = self.factor()
            return f if t[1] == "+" else _mul(_const(-1), f)
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            sign = 1
            s = self.peek()
            if s[0] == "op" and s[1] in "+-":
                self.take()
                sign = -1 if s[1] == "-" else 1
            n = self.take()
            if n[0] != "int":
                raise ParseError("exponent must be an integer", n[2], self.text)
            return _pow(base, sign * n[1], n[2], self.text)
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return _const(t[1])
        if t[0] == "var":
            if t[1] == "t":
                return {(0, 0): {1: Fraction(1)}}
            if t[1] == "x":
                return {(1, 0): {0: Fraction(1)}}
            return {(0, 1): {0: Fraction(1)}}
        if t[0] == "op" and t[1] == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError("unexpected token", t[2], self.text)


# ---------------------------------------------------------------------------


@dataclass
class SurfaceSpec:
    source: str
    model: WeierstrassModel
    delsarte_rows: tuple | None = None
    transform: dict = field(default_factory=dict)

    def delsarte(self):
        if self.delsarte_rows is None:
            raise DegenerateDelsarte("not a four-monomial surface")
        return DelsarteSurface.from_rows(self.delsarte_rows)


_ALLOWED = {(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)}


def _laurent(cs, ring):
    """{k: c} -> RationalFunction over ring."""
    if not cs:
        return RationalFunction(Poly(ring, [], "t"))
    lo = min(cs)
    shift = max(0, -lo)
    num = [0] * (max(cs) + shift + 1)
    for k, c in cs.items():
        num[k + shift] = _coerce(ring, c)
    den = Poly(ring, [0] * shift + [1], "t")
    return RationalFunction(Poly(ring, num, "t"), den)


def _coerce(ring, c):
    if isinstance(ring, FiniteField):
        c = Fraction(c)
        return ring(c.numerator) / ring(c.denominator)
    return ring(c)


def parse_equation(text: str, ring=QQ) -> SurfaceSpec:
    """Parse a Weierstrass-shaped equation in t, x, y."""
    p = _Parser(text)
    lhs, rhs = p.equation()
    F = _add(lhs, rhs, -1)
    for m in F:
        if m not in _ALLOWED:
            raise ParseError(f"monomial x^{m[0]} y^{m[1]} not allowed in a Weierstrass equation", 0, text)
    cy = F.get((0, 2), {})
    cx = F.get((3, 0), {})
    if list(cy) != [0] or list(cx) != [0]:
        raise ParseError("y^2 and x^3 must have constant coefficients", 0, text)
    uy = cy[0]
    u = -cx[0] / uy  # y^2 + ... = u x^3 + ...
    if u == 0:
        raise ParseError("missing x^3 term", 0, text)

    def coeff(m, sign):
        cs = F.get(m, {})
        return {k: sign * c / uy for k, c in cs.items()}

    # y^2 + a1 xy + a3 y = u x^3 + a2 x^2 + a4 x + a6, then x -> x/u, y -> y/u
    a1 = coeff((1, 1), 1)
    a3 = {k: c * u for k, c in coeff((0, 1), 1).items()}
    a2 = coeff((2, 0), -1)
    a4 = {k: c * u for k, c in coeff((1, 0), -1).items()}
    a6 = {k: c * u * u for k, c in coeff((0, 0), -1).items()}
    laurent = [a1, a2, a3, a4, a6]
    transform = {"x_scale": str(u)} if u != 1 else {}
    try:
        if any(k < 0 for cs in laurent for k in cs):
            E, _T = clear_denominators(ring, [_laurent(cs, ring) for cs in laurent], "t")
            transform["cleared"] = True
        else:
            E = WeierstrassModel(ring, *[_laurent(cs, ring).as_poly() for cs in laurent], var="t")
    except ValueError as exc:  # singular, constant or too large chi
        raise ParseError(f"not an elliptic surface ({exc or type(exc).__name__})", 0, text) from None
    try:
        DelsarteSurface.from_model(E)
        rows = tuple((a, b, c, 3 - b - c) for a, b, c in _model_monomials(E))
    except DegenerateDelsarte:
        rows = None
    return SurfaceSpec(text, E, rows, transform)


def _model_monomials(E):
    mons = [(0, 0, 2), (0, 3, 0)]
    for poly, (ex, ey) in zip(E.a, ((1, 1), (2, 0), (0, 1), (1, 0), (0, 0))):
        for i, c in enumerate(poly.coeffs):
            if c != 0:
                mons.append((i, ex, ey))
    return sorted(mons, key=lambda m: (-m[2], -m[1], -m[0]))


def parse_polynomial(text: str, var: str | None = None) -> Poly:
    """A univariate polynomial over Q in one of t, x, y (returned in variable x)."""
    p = _Parser(text)
    e = p.expression_only()
    used = set()
    for (i, j), cs in e.items():
        if i:
            used.add("x")
        if j:
            used.add("y")
        if any(k for k in cs):
            used.add("t")
        if i and j:
            used.add("xy")
    if len(used) > 1:
        raise ParseError("polynomial in more than one variable", 0, text)
    terms = {}
    for (i, j), cs in e.items():
        for k, c in cs.items():
            d = i + j + k
            if d < 0:
                raise ParseError("negative exponent in a polynomial", 0, text)
            terms[d] = terms.get(d, 0) + c
    deg = max(terms, default=0)
    return Poly(QQ, [terms.get(k, 0) for k in range(deg + 1)], var or "x")


def format_model(E: WeierstrassModel) -> str:
    """Equation text that parses back to the same model."""
    def poly_text(f: Poly):
        parts = []
        for i, c in reversed(list(enumerate(f.coeffs))):
            if c == 0:
                continue
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            cs = str(c)
            if mon:
                body = mon if c == 1 else (f"-{mon}" if c == -1 else f"({cs})*{mon}")
            else:
                body = f"({cs})"
            parts.append(body)
        return " + ".join(parts) if parts else "0"

    a1, a2, a3, a4, a6 = E.a
    lhs = ["y^2"]
    if not a1.is_zero():
        lhs.append(f"({poly_text(a1)})*x*y")
    if not a3.is_zero():
        lhs.append(f"({poly_text(a3)})*y")
    rhs = ["x^3"]
    if not a2.is_zero():
        rhs.append(f"({poly_text(a2)})*x^2")
    if not a4.is_zero():
        rhs.append(f"({poly_text(a4)})*x")
    if not a6.is_zero():
        rhs.append(f"({poly_text(a6)})")
    return " + ".join(lhs) + " = " + " + ".join(rhs)
