"""Coefficient rings: Q, Z, finite fields F_{p^k} (p >= 5) and Z/n.

Each ring is a small descriptor object.  Calling it coerces a value into the
ring's element type; elements are plain Python/flint scalars so that they can
be stored inside polynomials and matrices without wrapping.

    QQ            -> fractions.Fraction
    ZZ            -> int
    FiniteField   -> flint.nmod (k = 1) or flint.fq_default (k > 1)
    IntegersMod   -> flint.fmpz_mod
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

import flint
import gmpy2

Rational = Fraction


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def next_prime(n: int) -> int:
    return int(gmpy2.next_prime(n))


class _Ring:
    characteristic = 0
    is_field = True

    def is_zero(self, a) -> bool:
        return a == 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def key(self, a):
        raise NotImplementedError


class RationalField(_Ring):
    """The field Q, elements are Fractions."""

    def __call__(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        if isinstance(a, flint.fmpq):
            return Fraction(int(a.p), int(a.q))
        if isinstance(a, flint.fmpz):
            return Fraction(int(a))
        if isinstance(a, str):
            return Fraction(a)
        raise TypeError(f"cannot coerce {a!r} into QQ")

    def key(self, a):
        return (a.numerator, a.denominator)

    def sqrt(self, a):
        """Square root in Q or None."""
        if a < 0:
            return None
        n, d = a.numerator, a.denominator
        rn, rd = gmpy2.isqrt(n), gmpy2.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(int(rn), int(rd))
        return None

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class IntegerRing(_Ring):
    is_field = False

    def __call__(self, a):
        if isinstance(a, Fraction):
            if a.denominator != 1:
                raise ValueError(f"{a} is not an integer")
            return a.numerator
        return int(a)

    def key(self, a):
        return (a,)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


QQ = RationalField()
ZZ = IntegerRing()


class FiniteField(_Ring):
    """F_{p^k} with p >= 5, given by a monic irreducible modulus of degree k.

    The modulus is a tuple of ints in ascending order.  When omitted, flint's
    default (Conway when tabulated) is used and recorded.
    """

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p in (2, 3):
            raise ValueError("unsupported residue characteristic")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.characteristic = p
        if k == 1:
            self._ctx = None
            self.modulus = (0, 1)
        else:
            if modulus is None:
                ctx = flint.fq_default_ctx(p, k)
                mod = ctx.modulus()
                self.modulus = tuple(int(c) for c in mod.coeffs())
            else:
                mod = tuple(int(c) % p for c in modulus)
                if len(mod) != k + 1 or mod[-1] != 1:
                    raise ValueError("modulus must be monic of degree k")
                _, facs = flint.nmod_poly(list(mod), p).factor()
                if len(facs) != 1 or facs[0][1] != 1:
                    raise ValueError("modulus is not irreducible")
                ctx = flint.fq_default_ctx(p, k, modulus=flint.fmpz_mod_poly_ctx(p)(list(mod)))
                self.modulus = mod
            self._ctx = ctx
        self.q = p**k

    # coercion -----------------------------------------------------------
    def __call__(self, a):
        p = self.p
        if self._ctx is None:
            if isinstance(a, flint.nmod):
                if a.modulus() != p:
                    raise TypeError("element of a different prime field")
                return a
            if isinstance(a, Fraction):
                return flint.nmod(a.numerator, p) / flint.nmod(a.denominator, p)
            if isinstance(a, (list, tuple)):
                return flint.nmod(int(a[0]) if a else 0, p)
            return flint.nmod(int(a), p)
        if isinstance(a, flint.fq_default):
            return a
        if isinstance(a, Fraction):
            return self._ctx(a.numerator) / self._ctx(a.denominator)
        if isinstance(a, flint.nmod):
            return self._ctx(int(a))
        if isinstance(a, (list, tuple)):
            return self._ctx([int(c) for c in a])
        return self._ctx(int(a))

    @property
    def ctx(self):
        return self._ctx

    def key(self, a):
        """Canonical tuple of ints (ascending coefficients in the power basis)."""
        if self._ctx is None:
            return (int(a),)
        coeffs = [int(c) for c in a.to_list()]
        coeffs += [0] * (self.k - len(coeffs))
        return tuple(coeffs)

    def from_key(self, key):
        return self(list(key))

    def gen(self):
        if self._ctx is None:
            raise ValueError("prime field has no distinguished generator")
        return self._ctx.gen()

    def elements(self):
        if self._ctx is None:
            for i in range(self.p):
                yield flint.nmod(i, self.p)
            return
        for tup in itertools.product(range(self.p), repeat=self.k):
            yield self._ctx(list(tup))

    def random_element(self, rng: random.Random):
        return self.from_key([rng.randrange(self.p) for _ in range(self.k)])

    def frob(self, a, e: int = 1):
        """a^(p^e)."""
        if self._ctx is None:
            return a
        return a ** (self.p ** (e % self.k))

    def is_square(self, a) -> bool:
        if a == 0:
            return True
        return a ** ((self.q - 1) // 2) == 1

    def sqrt(self, a):
        """Canonical square root (smaller key of the two) or None."""
        if a == 0:
            return self(0)
        if not self.is_square(a):
            return None
        if self._ctx is None:
            r = flint.nmod(_sqrt_mod_p(int(a), self.p), self.p)
        else:
            r = a.sqrt()
        s = -r
        return r if self.key(r) <= self.key(s) else s

    def degree_of(self, a) -> int:
        """Degree over F_p of the subfield generated by a."""
        d = 1
        b = self.frob(a)
        while b != a:
            b = self.frob(b)
            d += 1
        return d

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    # embeddings ---------------------------------------------------------
    def embedding_into(self, other: "FiniteField", compatible_with=None) -> "FieldHom":
        """A field embedding self -> other.

        ``compatible_with`` may be a pair (f, g) of embeddings base -> self and
        base -> other; the returned h then satisfies h o f == g.
        """
        return _embedding(self, other, compatible_with)


class FieldHom:
    """Embedding of finite fields determined by the image of the generator."""

    def __init__(self, src: FiniteField, dst: FiniteField, image):
        self.src, self.dst, self.image = src, dst, image
        if src.k > 1:
            self._powers = [dst(1)]
            for _ in range(src.k - 1):
                self._powers.append(self._powers[-1] * image)

    def __call__(self, a):
        if self.src.k == 1:
            return self.dst(int(a))
        acc = self.dst(0)
        for c, pw in zip(self.src.key(a), self._powers):
            if c:
                acc += c * pw
        return acc

    def compose(self, first: "FieldHom") -> "FieldHom":
        """self o first."""
        if first.src.k == 1:
            return FieldHom(first.src, self.dst, None)
        return FieldHom(first.src, self.dst, self(first.image))


def _embedding(src, dst, compat):
    if src.p != dst.p or dst.k % src.k:
        raise ValueError(f"no embedding {src} -> {dst}")
    if src.k == 1:
        return FieldHom(src, dst, None)
    if src == dst and compat is None:
        return FieldHom(src, dst, dst.gen())
    roots = _modulus_roots(src, dst)
    for r in roots:
        h = FieldHom(src, dst, r)
        if compat is None:
            return h
        f, g = compat
        if f.src.k == 1 or h(f.image) == g.image:
            return h
    raise ValueError("no compatible embedding found")


@lru_cache(maxsize=256)
def _modulus_roots(src, dst):
    R = flint.fq_default_poly_ctx(dst.ctx)
    f = R([dst(c) for c in src.modulus])
    roots = [r for r, _ in f.roots()]
    roots.sort(key=dst.key)
    return tuple(roots)


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class IntegersMod(_Ring):
    """Z/nZ, elements are flint fmpz_mod values (n may be composite)."""

    is_field = False

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("modulus must be >= 2")
        self.n = n
        self._ctx = flint.fmpz_mod_ctx(n)
        self.is_field = is_prime(n)

    def __call__(self, a):
        if isinstance(a, Fraction):
            return self._ctx(a.numerator) / self._ctx(a.denominator)
        if isinstance(a, flint.fmpz_mod):
            return a
        return self._ctx(int(a))

    def key(self, a):
        return (int(a),)

    def symmetric(self, a) -> int:
        v = int(a)
        return v - self.n if v > self.n // 2 else v

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.n == self.n

    def __hash__(self):
        return hash(("Zmod", self.n))

    def __repr__(self):
        return f"Zmod({self.n})"


def GF(p: int, k: int = 1, modulus=None) -> FiniteField:
    return _gf_cached(p, k, tuple(modulus) if modulus is not None else None)


@lru_cache(maxsize=None)
def _gf_cached(p, k, modulus):
    return FiniteField(p, k, modulus)
