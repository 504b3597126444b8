"""Dense univariate polynomials over the rings of :mod:`fields`.

Poly is immutable.  Coefficients are stored ascending with no trailing zeros;
the zero polynomial has degree -1.  Products and divisions of large operands
are delegated to flint when the ring maps onto a flint polynomial type.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import flint

from .fields import QQ, ZZ, FiniteField, IntegersMod, RationalField

_FLINT_CUTOFF = 24


class Poly:
    __slots__ = ("ring", "coeffs", "var", "_hash")

    def __init__(self, ring, coeffs=(), var: str = "t", _raw: bool = False):
        if not _raw:
            coeffs = [ring(c) for c in coeffs]
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.ring = ring
        self.coeffs = tuple(coeffs)
        self.var = var
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def gen(cls, ring, var="t"):
        return cls(ring, [0, 1], var)

    @classmethod
    def const(cls, ring, c, var="t"):
        return cls(ring, [c], var)

    @classmethod
    def monomial(cls, ring, n, c=1, var="t"):
        return cls(ring, [0] * n + [c], var)

    def _new(self, coeffs):
        return Poly(self.ring, coeffs, self.var, _raw=True)

    # basic queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ring(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def valuation(self) -> int:
        """Order of vanishing at 0 (-1 for zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return -1

    # coercion -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise TypeError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return Poly(self.ring, [self.ring(other)], self.var, _raw=True)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring(other)
            if c == 0:
                return self._new([])
            return self._new([a * c for a in self.coeffs])
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._new([])
        if min(len(a), len(b)) > _FLINT_CUTOFF and _has_flint(self.ring):
            return from_flint(self.ring, to_flint(self) * to_flint(other), self.var)
        out = [self.ring(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self._coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if len(self.coeffs) < len(other.coeffs):
            return self._new([]), self
        if (
            len(other.coeffs) > _FLINT_CUTOFF
            and _has_flint(self.ring)
            and self.ring.is_field
        ):
            q, r = divmod(to_flint(self), to_flint(other))
            return from_flint(self.ring, q, self.var), from_flint(self.ring, r, self.var)
        lc = other.coeffs[-1]
        inv = None
        if lc != 1:
            if self.ring == ZZ:
                if lc != -1:
                    raise ValueError("division by non-monic polynomial over ZZ")
                inv = -1
            else:
                inv = 1 / lc
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        q = [self.ring(0)] * (len(rem) - db)
        b = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            if inv is not None:
                c = c * inv
            q[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] -= c * b[j]
        return self._new(q), self._new(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact division")
        return q

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.exact_div(other)
        return self * (1 / self.ring(other))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        try:
            other = self.ring(other)
        except (TypeError, ValueError):
            return NotImplemented
        if other == 0:
            return not self.coeffs
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self.ring.key(c) for c in self.coeffs)))
        return self._hash

    def key(self):
        """Canonical sortable representation."""
        return (self.degree, tuple(self.ring.key(c) for c in reversed(self.coeffs)))

    # evaluation and calculus -------------------------------------------
    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return self.ring(0) if not isinstance(x, Poly) else x._coerce(0)
        if isinstance(x, Poly) and not isinstance(acc, Poly):
            return x._coerce(acc)
        return acc

    def compose(self, g: "Poly") -> "Poly":
        return self(g)

    def derivative(self):
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = 1 / lc
        return self._new([c * inv for c in self.coeffs])

    def shift(self, n: int):
        """Multiply by var^n (n >= 0) or drop the lowest -n coefficients."""
        if n >= 0:
            return self._new([self.ring(0)] * n + list(self.coeffs))
        return self._new(self.coeffs[-n:])

    def reverse(self, n=None):
        n = self.degree if n is None else n
        c = list(self.coeffs) + [self.ring(0)] * (n + 1 - len(self.coeffs))
        return self._new(c[: n + 1][::-1])

    def map(self, ring, fn=None):
        fn = fn or ring
        return Poly(ring, [fn(c) for c in self.coeffs], self.var)

    def change_var(self, var):
        return Poly(self.ring, self.coeffs, var, _raw=True)

    # gcd family ---------------------------------------------------------
    def gcd(self, other):
        other = self._coerce(other)
        if _has_flint(self.ring) and self.ring.is_field:
            g = from_flint(self.ring, to_flint(self).gcd(to_flint(other)), self.var)
            return g.monic()
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, s, t) with s*self + t*other = g monic."""
        other = self._coerce(other)
        r0, r1 = self, other
        s0, s1 = self._coerce(1), self._coerce(0)
        t0, t1 = self._coerce(0), self._coerce(1)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = 1 / r0.lc
        return r0 * inv, s0 * inv, t0 * inv

    def inverse_mod(self, m):
        g, s, _ = self.xgcd(m)
        if g.degree != 0:
            raise ZeroDivisionError("not invertible modulo m")
        return s % m

    def pow_mod(self, n: int, m: "Poly"):
        if _has_flint(self.ring) and self.ring.is_field:
            fm = to_flint(m)
            r = to_flint(self % m).pow_mod(n, fm) if n > 0 else to_flint(self._coerce(1))
            return from_flint(self.ring, r, self.var)
        result = self._coerce(1) % m
        base = self % m
        while n:
            if n & 1:
                result = (result * base) % m
            n >>= 1
            if n:
                base = (base * base) % m
        return result

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    # Q-specific helpers -------------------------------------------------
    def content(self) -> Fraction:
        """Rational content c with self / c primitive in Z[x] and lc > 0."""
        if self.is_zero():
            return Fraction(0)
        from math import gcd

        den = 1
        for c in self.coeffs:
            den = lcm(den, Fraction(c).denominator)
        nums = [int(Fraction(c) * den) for c in self.coeffs]
        g = 0
        for n in nums:
            g = gcd(g, n)
        cont = Fraction(g, den)
        if self.coeffs[-1] < 0:
            cont = -cont
        return cont

    def primitive(self) -> "Poly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        if self.is_zero():
            return self
        return self * (1 / self.content())

    def int_coeffs(self):
        return [int(c) for c in self.coeffs]

    # display ------------------------------------------------------------
    def __repr__(self):
        return f"Poly({self.ring!r}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = str(c)
            if i == 0:
                terms.append(cs)
                continue
            mon = self.var if i == 1 else f"{self.var}^{i}"
            if cs == "1":
                terms.append(mon)
            elif cs == "-1":
                terms.append("-" + mon)
            else:
                if any(ch in cs.lstrip("-") for ch in "+- ") or "*" in cs:
                    cs = f"({cs})"
                terms.append(f"{cs}*{mon}")
        s = " + ".join(terms)
        return s.replace("+ -", "- ")


# flint bridge -----------------------------------------------------------


def _has_flint(ring) -> bool:
    return isinstance(ring, (RationalField, FiniteField))


def to_flint(f: Poly):
    ring = f.ring
    if isinstance(ring, RationalField):
        return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in f.coeffs])
    if isinstance(ring, FiniteField):
        if ring.k == 1:
            return flint.nmod_poly([int(c) for c in f.coeffs], ring.p)
        return flint.fq_default_poly_ctx(ring.ctx)(list(f.coeffs))
    if ring == ZZ:
        return flint.fmpz_poly(list(f.coeffs))
    if isinstance(ring, IntegersMod):
        return flint.fmpz_mod_poly_ctx(ring._ctx)([int(c) for c in f.coeffs])
    raise TypeError(f"no flint type for {ring}")


def from_flint(ring, g, var="t") -> Poly:
    if isinstance(ring, RationalField):
        cs = [Fraction(int(c.p), int(c.q)) for c in g.coeffs()]
    elif isinstance(ring, FiniteField):
        if ring.k == 1:
            cs = [flint.nmod(int(c), ring.p) for c in g.coeffs()]
        else:
            cs = list(g.coeffs())
    elif ring == ZZ:
        cs = [int(c) for c in g.coeffs()]
    else:
        cs = [ring(int(c)) for c in g.coeffs()]
    return Poly(ring, cs, var, _raw=True)


def poly_from_ints(ring, coeffs, var="t") -> Poly:
    return Poly(ring, coeffs, var)


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        if den is None:
            den = num._coerce(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = num._coerce(1)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                lc = den.lc
                if lc != 1:
                    inv = 1 / lc
                    num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def ring(self):
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other, _reduced=False)
        return RationalFunction(self.num._coerce(other))

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def map(self, ring, fn=None):
        return RationalFunction(self.num.map(ring, fn), self.den.map(ring, fn))

    def key(self):
        return (self.num.key(), self.den.key())

    def __repr__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"
