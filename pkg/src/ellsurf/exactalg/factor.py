"""Polynomial factorization over F_q and Q, Hensel lifting, square roots.

Finite fields: squarefree decomposition, distinct-degree splitting and the
Cantor-Zassenhaus equal-degree split driven by a seeded generator.
Rationals: Zassenhaus (factor mod a small prime, Hensel lift past the
Mignotte bound, recombine by subset search).  Arithmetic is done on flint
polynomial objects; the control flow lives here.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb, gcd, isqrt, lcm

import flint

from .fields import QQ, ZZ, FiniteField, IntegersMod, RationalField, GF, is_prime, next_prime
from .poly import Poly, from_flint, to_flint

DEFAULT_SEED = 20240601
MAX_RECOMBINATION_FACTORS = 20


# ---------------------------------------------------------------------------
# helpers over F_q
# ---------------------------------------------------------------------------


class _FqPolys:
    """Uniform constructor for nmod_poly / fq_default_poly over one field."""

    def __init__(self, F: FiniteField):
        self.F = F
        self.q = F.q
        if F.k == 1:
            p = F.p
            self.make = lambda cs: flint.nmod_poly([int(c) for c in cs], p)
        else:
            R = flint.fq_default_poly_ctx(F.ctx)
            self.make = lambda cs: R(list(cs))

    def x(self):
        return self.make([0, 1])

    def one(self):
        return self.make([1])

    def random(self, deg, rng):
        return self.make([self.F.random_element(rng) for _ in range(deg + 1)])


def _monic(f):
    lc = f.coeffs()[-1]
    if lc == 1:
        return f
    return f * (1 / lc)


def _pth_root_poly(f, F: FiniteField, P: _FqPolys):
    """g with g^p == f for f in F[x^p]."""
    p = F.p
    cs = f.coeffs()
    out = []
    for i in range(0, len(cs), p):
        c = cs[i]
        # inverse Frobenius: c^(p^(k-1))
        out.append(c ** (p ** (F.k - 1)) if F.k > 1 else c)
    return P.make(out)


def _sqf_fq(f, F, P):
    """Squarefree decomposition of monic f: list of (g, e)."""
    res = []
    p = F.p
    i = 1
    df = f.derivative()
    c = f.gcd(df)
    w = f // c
    while w.degree() > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree() > 0:
            res.append((_monic(z), i))
        i += 1
        w = y
        c = c // y
    if c.degree() > 0:
        root = _pth_root_poly(_monic(c), F, P)
        for g, e in _sqf_fq(root, F, P):
            res.append((g, e * p))
    return res


def _ddf(f, P: _FqPolys):
    """Distinct-degree factorization of squarefree monic f."""
    out = []
    x = P.x()
    h = x
    d = 0
    g = f
    while g.degree() >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(P.q, g) if h.degree() >= 0 else h
        u = g.gcd(h - x)
        if u.degree() > 0:
            out.append((_monic(u), d))
            g = g // u
            h = h % g
    if g.degree() > 0:
        out.append((_monic(g), g.degree()))
    return out


def _edf(f, d, P: _FqPolys, rng):
    """Split squarefree monic f, product of degree-d irreducibles (odd q)."""
    n = f.degree()
    if n == d:
        return [f]
    e = (P.q**d - 1) // 2
    while True:
        a = P.random(n - 1, rng)
        if a.degree() < 1:
            continue
        b = a.pow_mod(e, f) - P.one()
        g = f.gcd(b)
        if 0 < g.degree() < n:
            g = _monic(g)
            return _edf(g, d, P, rng) + _edf(_monic(f // g), d, P, rng)


def _factor_fq_flint(f, F, seed):
    P = _FqPolys(F)
    rng = random.Random(seed)
    out = []
    for g, e in _sqf_fq(_monic(f), F, P):
        for u, d in _ddf(g, P):
            for h in _edf(u, d, P, rng):
                out.append((h, e))
    return out


def factor_fq(f: Poly, seed: int = DEFAULT_SEED):
    """Monic irreducible factorization over F_q: list of (factor, multiplicity)."""
    if f.is_zero():
        raise ValueError("zero input")
    F = f.ring
    if not isinstance(F, FiniteField):
        raise TypeError("factor_fq expects a polynomial over a finite field")
    if f.degree == 0:
        return []
    facs = [(from_flint(F, g, f.var), e) for g, e in _factor_fq_flint(to_flint(f), F, seed)]
    merged = {}
    for g, e in facs:
        merged[g] = merged.get(g, 0) + e
    return sorted(merged.items(), key=lambda ge: ge[0].key())


def roots_fq(f: Poly, seed: int = DEFAULT_SEED):
    """Distinct roots of f in its coefficient field, sorted by key."""
    F = f.ring
    P = _FqPolys(F)
    g = _monic(to_flint(f))
    x = P.x()
    h = x.pow_mod(F.q, g) - x
    u = g.gcd(h)
    if u.degree() <= 0:
        return []
    rng = random.Random(seed)
    lin = _edf(_monic(u), 1, P, rng)
    roots = [-l.coeffs()[0] for l in lin]
    roots.sort(key=F.key)
    return roots


def degree_pattern_fq(f: Poly):
    """Sorted list of irreducible factor degrees (with multiplicity) of squarefree f."""
    F = f.ring
    P = _FqPolys(F)
    degs = []
    for u, d in _ddf(_monic(to_flint(f)), P):
        degs += [d] * (u.degree() // d)
    return sorted(degs)


def is_irreducible_fq(f: Poly) -> bool:
    if f.degree <= 0:
        return False
    F = f.ring
    P = _FqPolys(F)
    g = _monic(to_flint(f))
    if g.gcd(g.derivative()).degree() > 0:
        return False
    d = _ddf(g, P)
    return len(d) == 1 and d[0][1] == f.degree


# ---------------------------------------------------------------------------
# square roots
# ---------------------------------------------------------------------------


class _NotSquare:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NOT_A_SQUARE"

    def __bool__(self):
        return False


NOT_A_SQUARE = _NotSquare()


def poly_sqrt(f: Poly):
    """Exact square root with canonical leading coefficient, or NOT_A_SQUARE."""
    ring = f.ring
    if f.is_zero():
        return f
    if isinstance(ring, FiniteField):
        pass
    elif not isinstance(ring, RationalField):
        raise TypeError("poly_sqrt needs Q or F_q")
    if f.degree % 2:
        return NOT_A_SQUARE
    r = ring.sqrt(f.lc)
    if r is None:
        return NOT_A_SQUARE
    n = f.degree // 2
    g = [ring(0)] * (n + 1)
    g[n] = r
    inv2 = 1 / (2 * r)
    c = f.coeffs
    for k in range(1, n + 1):
        idx = 2 * n - k
        s = c[idx]
        for i in range(n - k + 1, n + 1):
            j = idx - i
            if n - k < j <= n:
                s -= g[i] * g[j]
        g[n - k] = s * inv2
    root = Poly(ring, g, f.var, _raw=True)
    if root * root != f:
        return NOT_A_SQUARE
    return root


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def _zmod_ctx(m):
    return flint.fmpz_mod_poly_ctx(flint.fmpz_mod_ctx(m))


def _hensel_step(f, g, h, s, t, m, R2):
    """Quadratic lift of f = g*h, s*g + t*h = 1 from mod m to mod m^2."""
    f, g, h, s, t = R2(f), R2(g), R2(h), R2(s), R2(t)
    e = f - g * h
    q, r = divmod(s * e, h)
    g2 = g + t * e + q * g
    h2 = h + r
    b = s * g2 + t * h2 - 1
    c, d = divmod(s * b, h2)
    s2 = s - d
    t2 = t - t * b - c * g2
    return g2, h2, s2, t2


def _lift_coeffs(poly):
    return [int(c) for c in poly.coeffs()]


def _hensel_two(fz, g, h, p, k):
    """Lift f = g*h mod p (h monic) to mod p^k; inputs are int coefficient lists."""
    R = _zmod_ctx(p)
    gp, hp = R(g), R(h)
    d, s, t = gp.xgcd(hp)
    if d.degree() != 0:
        raise ValueError("factors not coprime mod p")
    inv = 1 / d.coeffs()[0]
    s, t = s * inv, t * inv
    m = p
    gl, hl, sl, tl = _lift_coeffs(gp), _lift_coeffs(hp), _lift_coeffs(s), _lift_coeffs(t)
    target = p**k
    while m < target:
        m2 = min(m * m, target)
        R2 = _zmod_ctx(m2)
        G, H, S, T = _hensel_step(fz, gl, hl, sl, tl, m, R2)
        gl, hl, sl, tl = _lift_coeffs(G), _lift_coeffs(H), _lift_coeffs(S), _lift_coeffs(T)
        m = m2
    return gl, hl


def _hensel_multi(fz, factors, p, k):
    """factors: monic int lists mod p; returns monic lifts mod p^k (lc absorbed in first)."""
    mod = p**k
    if len(factors) == 1:
        lc = fz[-1]
        inv = pow(lc, -1, mod)
        return [[c * inv % mod for c in fz]]
    R = _zmod_ctx(p)
    lc = fz[-1]
    rest = R([1])
    for fac in factors[1:]:
        rest = rest * R(fac)
    g0 = R(factors[0]) * lc
    gl, hl = _hensel_two(fz, _lift_coeffs(g0), _lift_coeffs(rest), p, k)
    Rk = _zmod_ctx(mod)
    g = Rk(gl)
    inv = 1 / g.coeffs()[-1]
    first = _lift_coeffs(g * inv)
    return [first] + _hensel_multi(hl, factors[1:], p, k)


def hensel_lift(f: Poly, factors, B: int):
    """Lift a coprime factorization of f mod p to mod p^B.

    f has integer coefficients (ring ZZ or QQ) and leading coefficient prime
    to p.  ``factors`` are polynomials over GF(p) or Zmod(p).  Returns monic
    factors over Zmod(p^B) (their product equals f / lc(f) mod p^B).
    """
    if not factors:
        raise ValueError("no factors")
    ring = factors[0].ring
    p = ring.p if isinstance(ring, FiniteField) else ring.n
    fz = [int(c) for c in f.coeffs]
    lists = []
    for fac in factors:
        cs = [int(c) % p for c in fac.coeffs]
        inv = pow(cs[-1], -1, p)
        lists.append([c * inv % p for c in cs])
    # coprimality check
    for a, b in itertools.combinations(lists, 2):
        if flint.nmod_poly(a, p).gcd(flint.nmod_poly(b, p)).degree() > 0:
            raise ValueError("non-coprime input factors")
    Rp = flint.nmod_poly([1], p)
    for cs in lists:
        Rp = Rp * flint.nmod_poly(cs, p)
    if Rp * flint.nmod(fz[-1], p) != flint.nmod_poly(fz, p):
        raise ValueError("factors do not multiply to f mod p")
    if B == 1:
        lifted = lists
    else:
        lifted = _hensel_multi(fz, lists, p, B)
    Zm = IntegersMod(p**B)
    return [Poly(Zm, cs, f.var) for cs in lifted]


# ---------------------------------------------------------------------------
# factorization over Q
# ---------------------------------------------------------------------------


def _cyclotomic_list(n):
    """Phi_d for d | n as int coefficient lists (dict d -> list)."""
    out = {}
    for d in sorted(x for x in range(1, n + 1) if n % x == 0):
        num = flint.fmpz_poly([-1] + [0] * (d - 1) + [1])
        for e, phi in out.items():
            if d % e == 0:
                num = num // phi
        out[d] = num
    return out


def _cyclotomic_split(cs):
    """Factor x^n - 1 or x^n + 1 into cyclotomic polynomials, else None."""
    n = len(cs) - 1
    if n < 2 or cs[-1] != 1 or any(c for c in cs[1:-1]) or cs[0] not in (1, -1):
        return None
    if cs[0] == -1:
        phis = _cyclotomic_list(n)
        return [phis[d] for d in sorted(phis)]
    phis = _cyclotomic_list(2 * n)
    return [phis[d] for d in sorted(phis) if n % d != 0]


def _mignotte_bound(cs):
    n = len(cs) - 1
    norm = isqrt(sum(c * c for c in cs)) + 1
    best = 0
    for j in range(n + 1):
        best = max(best, comb(n, j))
    return best * norm * abs(cs[-1])


def _choose_prime(fz, tries=6):
    best = None
    p = 3
    lc = fz[-1]
    found = 0
    while found < tries:
        p = next_prime(p)
        if lc % p == 0:
            continue
        fp = flint.nmod_poly(fz, p)
        if fp.gcd(fp.derivative()).degree() > 0:
            continue
        found += 1
        F = GF(p)
        degs = degree_pattern_fq(Poly(F, fz))
        if best is None or len(degs) < best[1]:
            best = (p, len(degs))
        if len(degs) == 1:
            break
    return best[0]


def _zassenhaus(fz):
    """Irreducible factors of primitive squarefree integer polynomial (int lists)."""
    n = len(fz) - 1
    if n <= 1:
        return [fz]
    p = _choose_prime(fz)
    F = GF(p)
    modfacs = [g for g, _ in factor_fq(Poly(F, fz))]
    r = len(modfacs)
    if r == 1:
        return [fz]
    if r > MAX_RECOMBINATION_FACTORS:
        fl = flint.fmpz_poly(fz).factor()[1]
        return [[int(c) for c in g.coeffs()] for g, _ in fl]
    bound = 2 * _mignotte_bound(fz) + 1
    k = 1
    while p**k < bound:
        k += 1
    mod = p**k
    lifted = hensel_lift(Poly(ZZ, fz), modfacs, k)
    lifted = [[int(c) for c in g.coeffs] for g in lifted]
    Rm = _zmod_ctx(mod)
    result = []
    remaining = list(range(r))
    f = flint.fmpz_poly(fz)
    s = 1
    while 2 * s <= len(remaining):
        hit = False
        for subset in itertools.combinations(remaining, s):
            lc = int(f.coeffs()[-1])
            g = Rm([lc])
            for i in subset:
                g = g * Rm(lifted[i])
            gz = flint.fmpz_poly([_sym(int(c), mod) for c in g.coeffs()])
            gz = flint.fmpz_poly([c // gz.content() for c in gz.coeffs()])
            q, rem = divmod(f, gz)
            if rem == 0:
                result.append([int(c) for c in gz.coeffs()])
                f = q
                remaining = [i for i in remaining if i not in subset]
                hit = True
                break
        if not hit:
            s += 1
    result.append([int(c) for c in f.coeffs()])
    return result


def _sym(v, m):
    v %= m
    return v - m if v > m // 2 else v


def _sqf_q(f: Poly):
    """Yun squarefree decomposition over Q (monic parts)."""
    res = []
    i = 1
    c = f.gcd(f.derivative())
    w = f // c
    while w.degree > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            res.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    return res


def factor_q(f: Poly):
    """Irreducible factorization over Q: list of (monic factor, multiplicity).

    Ordered by degree, then by coefficient tuple.
    """
    if f.is_zero():
        raise ValueError("zero input")
    if f.degree <= 0:
        return []
    f = f.map(QQ) if f.ring != QQ else f
    out = []
    v = f.valuation()
    if v > 0:
        out.append((Poly.gen(QQ, f.var), v))
        f = f.shift(-v)
    for part, e in _sqf_q(f):
        prim = part.primitive()
        cs = [int(c) for c in prim.coeffs]
        cyc = _cyclotomic_split(cs)
        if cyc is not None:
            pieces = [[int(c) for c in g.coeffs()] for g in cyc]
        else:
            pieces = _zassenhaus(cs)
        for g in pieces:
            out.append((Poly(QQ, g, f.var).monic(), e))
    out.sort(key=lambda ge: (ge[0].degree, ge[0].key()))
    return out


def is_irreducible_q(f: Poly) -> bool:
    fs = factor_q(f)
    return len(fs) == 1 and fs[0][1] == 1


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors (char 0 or via derivative)."""
    if f.degree <= 0:
        return f._coerce(1)
    if isinstance(f.ring, FiniteField):
        out = f._coerce(1)
        P = _FqPolys(f.ring)
        for g, _ in _sqf_fq(_monic(to_flint(f)), f.ring, P):
            out = out * from_flint(f.ring, g, f.var)
        return out
    return (f // f.gcd(f.derivative())).monic()


def cyclotomic(n: int, var="t") -> Poly:
    return Poly(QQ, [int(c) for c in _cyclotomic_list(n)[n].coeffs()], var)
