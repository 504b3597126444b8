"""Integral sections: search, Frobenius action, heights and Mordell-Weil lattices.

Integral sections have x of degree <= 2 chi and y of degree <= 3 chi.  Two
search backends exist.  ``search_integral`` scans the non-constant part of x
over F_q and solves for the constant term; ``search_via_ideal`` equates
t-coefficients and hands the zero-dimensional system to polysolve.

Heights use h(P) = 2 chi + 2 (P.O) - sum_v contr_v(P) and the pairing is
obtained by polarization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .exactalg.factor import factor_fq, roots_fq
from .exactalg.fields import GF, QQ, FiniteField, RationalField, next_prime
from .exactalg.matrix import hnf, lattice_intersection, lll, rank as mat_rank, solve
from .exactalg.poly import Poly, RationalFunction
from .fibres import (
    INF,
    _chart,
    _contr_single,
    bad_places,
    fibre_inventory,
    fibre_symbols,
    kodaira_type,
    mw_shape_check,
    shioda_tate_rank,
    valuation,
    zero_intersection,
)
from .polysolve import (
    DEFAULT_BUDGET,
    MultiPoly,
    NotZeroDimensional,
    buchberger,
    coordinate_eliminants,
    embed_point,
    rational_univariate_representation,
    variety_fq,
)
from .weierstrass import (
    Section,
    WeierstrassModel,
    add,
    complete_square,
    negate,
    on_curve,
    sub,
    torsion_order,
)

BRUTE_BUDGET = 2 * 10**9
MAX_SECTIONS_RATIONAL = 240


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class SectionSet:
    model: WeierstrassModel
    sections: list
    complete: bool = False
    certificate: str = ""
    degrees: dict = field(default_factory=dict)  # section key -> field degree

    def __len__(self):
        return len(self.sections)

    def __iter__(self):
        return iter(self.sections)


def _canonical(sections):
    uniq = {}
    for P in sections:
        uniq[P.key()] = P
    return [uniq[k] for k in sorted(uniq)]


def _check_bound(E, sections):
    if E.chi == 1 and len(sections) > MAX_SECTIONS_RATIONAL:
        raise AssertionError("more than 240 integral sections on a rational surface")


# ---------------------------------------------------------------------------
# brute-force backend
# ---------------------------------------------------------------------------


def _pmul(A, B, zero):
    out = [zero] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if a == 0 if not isinstance(a, Poly) else a.is_zero():
            continue
        for j, b in enumerate(B):
            out[i + j] = out[i + j] + a * b
    return out


def _padd(A, B, zero):
    n = max(len(A), len(B))
    return [(A[i] if i < len(A) else zero) + (B[i] if i < len(B) else zero) for i in range(n)]


def search_integral(E: WeierstrassModel, budget: int = BRUTE_BUDGET) -> SectionSet:
    """All integral sections defined over the coefficient field F_q of E."""
    F = E.ring
    if not isinstance(F, FiniteField):
        raise TypeError("search_integral needs a model over F_q")
    if E.chi > 2:
        raise ValueError("section search needs chi in {1, 2}")
    q = F.q
    dx = 2 * E.chi
    if q ** (dx + 1) > budget:
        raise SearchBudgetExceeded(
            f"use elimination backend: q^{dx + 1} = {q ** (dx + 1)} exceeds {budget}"
        )
    S, T = complete_square(E)
    a2, a4, a6 = S.a2, S.a4, S.a6
    elems = list(F.elements())
    zero = F(0)
    c = Poly.gen(F, "c")
    czero = Poly(F, [], "c")
    found = []
    for top in itertools.product(elems, repeat=dx):
        # top = (x_1, ..., x_dx): coefficients of t^1..t^dx
        if all(v == 0 for v in top):
            for cv in elems:
                x = Poly(F, [cv], E.var)
                found.extend(_complete_from_x(S, x))
            continue
        X = [c] + [Poly(F, [v], "c") for v in top]
        while X and X[-1].is_zero():
            X.pop()
        A2 = [Poly(F, [v], "c") for v in a2.coeffs]
        A4 = [Poly(F, [v], "c") for v in a4.coeffs]
        A6 = [Poly(F, [v], "c") for v in a6.coeffs]
        X2 = _pmul(X, X, czero)
        R = _padd(_padd(_pmul(X2, X, czero), _pmul(A2, X2, czero), czero), _padd(_pmul(A4, X, czero), A6, czero), czero)
        while R and R[-1].is_zero():
            R.pop()
        D = len(R) - 1
        if D < 1 or R[D].degree > 0:
            # leading term depends on c: test every c directly
            for cv in elems:
                x = Poly(F, [cv] + list(top), E.var)
                found.extend(_complete_from_x(S, x))
            continue
        if D % 2:
            continue
        L = R[D].coeffs[0]
        r = F.sqrt(L)
        if r is None:
            continue
        n = D // 2
        Y = [czero] * (n + 1)
        Y[n] = Poly(F, [r], "c")
        inv2 = 1 / (2 * r)
        for k in range(1, n + 1):
            idx = 2 * n - k
            s = R[idx]
            for i in range(n - k + 1, n + 1):
                j = idx - i
                if n - k < j <= n:
                    s = s - Y[i] * Y[j]
            Y[n - k] = s * inv2
        resid = _padd(R, [-v for v in _pmul(Y, Y, czero)], czero)
        g = czero
        for v in resid:
            if not v.is_zero():
                g = v if g.is_zero() else g.gcd(v)
        if g.is_zero():
            cands = elems
        elif g.degree == 0:
            continue
        else:
            cands = roots_fq(g)
        for cv in cands:
            x = Poly(F, [cv] + list(top), E.var)
            y = Poly(F, [v(cv) for v in Y], E.var)
            for yy in (y, -y) if not y.is_zero() else (y,):
                P = Section(x, yy)
                found.append(P)
    out = []
    for P in found:
        Q = T.inverse(P)
        if not on_curve(E, Q):
            raise AssertionError("search produced a point off the curve")
        out.append(Q)
    out = _canonical(out)
    _check_bound(E, out)
    return SectionSet(E, out, False, "sections over the base field only")


def _complete_from_x(S, x):
    from .exactalg.factor import NOT_A_SQUARE, poly_sqrt

    R = x * x * x + S.a2 * x * x + S.a4 * x + S.a6
    y = poly_sqrt(R)
    if y is NOT_A_SQUARE:
        return []
    if y.degree > 3 * S.chi:
        return []
    if y.is_zero():
        return [Section(x, y)]
    return [Section(x, y), Section(x, -y)]


def search_closure(E: WeierstrassModel, max_degree: int = 6, budget: int = BRUTE_BUDGET):
    """Brute search over F_{q^m}, m = 1, 2, ... with the heuristic stopping rule.

    Stops when the Gram rank reaches the Shioda-Tate rank and the section
    count has been stable for two further extension steps (Frobenius-closed).
    """
    F = E.ring
    counts = []
    st = shioda_tate_rank(E) if E.chi == 1 else None
    last = None
    for m in range(1, max_degree + 1):
        K = GF(F.p, F.k * m)
        hom = F.embedding_into(K)
        EK = E.extend(K, hom)
        try:
            S = search_integral(EK, budget)
        except SearchBudgetExceeded:
            break
        counts.append(len(S))
        r = gram(EK, S.sections).rank if S.sections else 0
        last = S
        if st is not None and r == st and len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            last.complete = True
            last.certificate = (
                f"heuristic: Gram rank {r} equals Shioda-Tate rank; count stable over "
                f"degrees {m - 2}..{m}"
            )
            return last
    if last is not None:
        last.certificate = f"heuristic not met up to degree {len(counts)}; counts {counts}"
    return last


# ---------------------------------------------------------------------------
# elimination backend
# ---------------------------------------------------------------------------

_NAMES = "abcdefghijklmnopqrstuvwxyz"


def coefficient_system(E: WeierstrassModel, ring=None):
    """Equations in the coefficients of x and y (top coefficient first).

    Returns (generators, names, xdeg, ydeg): names[:xdeg+1] are the x
    coefficients of t^xdeg .. t^0, the rest the y coefficients.
    """
    ring = ring or E.ring
    chi = E.chi
    xdeg, ydeg = 2 * chi, 3 * chi
    n = xdeg + ydeg + 2
    names = tuple(_NAMES[:n])
    gens = [MultiPoly.var(ring, names, v) for v in names]
    X = list(reversed(gens[: xdeg + 1]))  # ascending in t
    Y = list(reversed(gens[xdeg + 1 :]))
    zero = MultiPoly(ring, names, {})

    def const(p: Poly):
        return [MultiPoly.const(ring, names, c) for c in p.coeffs]

    a1, a2, a3, a4, a6 = (const(c) for c in E.a)
    lhs = _padd(_padd(_pmul(Y, Y, zero), _pmul(a1, _pmul(X, Y, zero), zero), zero), _pmul(a3, Y, zero), zero)
    X2 = _pmul(X, X, zero)
    rhs = _padd(
        _padd(_pmul(X2, X, zero), _pmul(a2, X2, zero), zero),
        _padd(_pmul(a4, X, zero), a6, zero),
        zero,
    )
    eqs = _padd(lhs, [-v for v in rhs], zero)
    eqs = [e for e in eqs if not e.is_zero()]
    return eqs, names, xdeg, ydeg


def _sections_from_coords(E, coords, xdeg, ring, var):
    xs = list(reversed(coords[: xdeg + 1]))
    ys = list(reversed(coords[xdeg + 1 :]))
    return Section(Poly(ring, xs, var, _raw=True), Poly(ring, ys, var, _raw=True))


@dataclass
class RationalIdealSections:
    """Result over Q: per-coordinate eliminants, an RUR and the rational points."""

    model: WeierstrassModel
    names: tuple
    eliminants: dict
    rur: object
    count: int
    rational_sections: list


def search_via_ideal(E: WeierstrassModel, budget: int = DEFAULT_BUDGET):
    """Integral sections through the coefficient ideal.

    Over F_q: a SectionSet over F_{q^m} (m = lcm of point degrees) with the
    degree of each section recorded; it is complete over the algebraic
    closure.  Over Q: a RationalIdealSections record.
    """
    if E.chi > 2:
        raise ValueError("section search needs chi in {1, 2}")
    eqs, names, xdeg, ydeg = coefficient_system(E)
    G = buchberger(eqs, "grevlex", budget)
    F = E.ring
    if isinstance(F, RationalField):
        if G.is_unit():
            return RationalIdealSections(E, names, {}, None, 0, [])
        rur = rational_univariate_representation(G)
        elim = coordinate_eliminants(rur_ideal(G))
        rat = []
        for l_root in _rational_roots(rur.mu):
            coords = [R(l_root) for R in rur.coords]
            rat.append(_sections_from_coords(E, coords, xdeg, QQ, E.var))
        rat = _canonical(rat)
        return RationalIdealSections(E, names, elim, rur, rur.dim, rat)
    if not isinstance(F, FiniteField):
        raise TypeError("search_via_ideal needs Q or F_q coefficients")
    if G.is_unit():
        return SectionSet(E, [], True, "ideal is (1): no integral sections")
    pts = variety_fq(G, budget)
    m = 1
    for P in pts:
        m = lcm(m, P.degree)
    K = GF(F.p, F.k * m)
    hom = F.embedding_into(K) if F.k == 1 else _canon(F, K)
    EK = E.extend(K, hom) if K != F else E
    out = []
    degrees = {}
    for P in pts:
        coords = embed_point(P, F, K)
        S = _sections_from_coords(EK, coords, xdeg, K, E.var)
        S.field_degree = P.degree
        out.append(S)
        degrees[S.key()] = P.degree
    out = _canonical(out)
    _check_bound(E, out)
    for S in out:
        if not on_curve(EK, S):
            raise AssertionError("ideal point is not a section")
    return SectionSet(EK, out, True, "complete: zero-dimensional elimination over the algebraic closure", degrees)


def rur_ideal(G):
    from .polysolve import radical

    return radical(G)


def _canon(F, K):
    from .polysolve import _canonical_hom

    return _canonical_hom(F, K) if F.k > 1 else F.embedding_into(K)


def _rational_roots(mu: Poly):
    out = []
    from .exactalg.factor import factor_q

    for g, _ in factor_q(mu):
        if g.degree == 1:
            out.append(-g.coeffs[0] / g.coeffs[1])
    return out


# ---------------------------------------------------------------------------
# Frobenius
# ---------------------------------------------------------------------------


@dataclass
class FrobeniusData:
    q: int
    orbits: list  # lists of indices into the section list
    orbit_degrees: list
    fod_degree: int


def frobenius_image(P: Section, q: int) -> Section:
    if P.is_zero():
        return P
    K = P.x.ring

    def fr(f: RationalFunction):
        return RationalFunction(
            Poly(K, [c**q for c in f.num.coeffs], f.num.var, _raw=True),
            Poly(K, [c**q for c in f.den.coeffs], f.den.var, _raw=True),
        )

    return Section(fr(P.x), fr(P.y), P.field_degree)


def frobenius(S: SectionSet, q: int | None = None) -> FrobeniusData:
    """Orbits of the q-power map (q defaults to the prime field size)."""
    secs = S.sections
    if not secs:
        return FrobeniusData(q or 0, [], [], 1)
    K = secs[0].x.ring
    q = q or K.p
    index = {P.key(): i for i, P in enumerate(secs)}
    perm = []
    for P in secs:
        Q = frobenius_image(P, q)
        j = index.get(Q.key())
        if j is None:
            raise ValueError("section set incomplete")
        perm.append(j)
    seen = [False] * len(secs)
    orbits = []
    for i in range(len(secs)):
        if seen[i]:
            continue
        orb = []
        j = i
        while not seen[j]:
            seen[j] = True
            orb.append(j)
            j = perm[j]
        orbits.append(orb)
    degs = [len(o) for o in orbits]
    fod = 1
    for d in degs:
        fod = lcm(fod, d)
    return FrobeniusData(q, orbits, degs, fod)


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------


class HeightPairing:
    """Caches the fibre inventory and local charts of a model."""

    def __init__(self, E: WeierstrassModel, fibres=None):
        self.E = E
        self.fibres = fibres if fibres is not None else fibre_inventory(E)
        self.reducible = []
        for F in self.fibres:
            if F.m_v > 1:
                S, pi, T = _chart(E, F.place)
                self.reducible.append((F, S, pi, T))
        self._h = {}

    def contributions(self, P: Section):
        return [(F, _contr_single(S, F, pi, T(P))) for F, S, pi, T in self.reducible]

    def height(self, P: Section) -> Fraction:
        if P.is_zero():
            return Fraction(0)
        key = P.key()
        h = self._h.get(key)
        if h is None:
            po = zero_intersection(self.E, P, self.fibres)
            c = sum(F.place.degree * v for F, v in self.contributions(P))
            h = 2 * self.E.chi + 2 * po - c
            self._h[key] = h
        return h

    def pairing(self, P: Section, Q: Section) -> Fraction:
        if P == Q:
            return self.height(P)
        D = sub(self.E, P, Q)
        return (self.height(P) + self.height(Q) - self.height(D)) / 2


def height(E: WeierstrassModel, P: Section, fibres=None) -> Fraction:
    return HeightPairing(E, fibres).height(P)


@dataclass
class HeightGram:
    basis: list
    gram: list
    rank: int
    determinant: Fraction


def _det(M):
    from .exactalg.matrix import det

    return Fraction(det(M)) if M else Fraction(1)


def gram(E: WeierstrassModel, sections, pairing: HeightPairing | None = None) -> HeightGram:
    H = pairing or HeightPairing(E)
    n = len(sections)
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = H.height(sections[i])
        for j in range(i):
            G[i][j] = G[j][i] = H.pairing(sections[i], sections[j])
    r = mat_rank(G) if n else 0
    return HeightGram(list(sections), G, r, _det(G))


def independent_subset(E, sections, pairing: HeightPairing | None = None):
    """Greedy maximal independent subset (by Gram rank), with its Gram."""
    H = pairing or HeightPairing(E)
    chosen = []
    G = []
    for P in sections:
        if H.height(P) == 0:
            continue
        row = [H.pairing(P, Q) for Q in chosen]
        cand = [r + [x] for r, x in zip(G, row)] + [row + [H.height(P)]]
        if _det(cand) != 0:
            chosen.append(P)
            G = cand
    return chosen, G


def span_rank(E, sections, pairing: HeightPairing | None = None) -> int:
    """Rank of the Gram matrix of ``sections`` (via an independent subset)."""
    chosen, _ = independent_subset(E, sections, pairing)
    return len(chosen)


def _combine(E, coeffs, secs):
    R = Section.zero()
    from .weierstrass import multiply

    for c, P in zip(coeffs, secs):
        if c:
            R = add(E, R, multiply(E, c, P))
    return R


def mw_basis(E: WeierstrassModel, sections, pairing: HeightPairing | None = None):
    """(LLL-reduced basis, Gram, torsion sections, torsion invariants).

    The lattice generated by ``sections`` modulo torsion is saturated
    incrementally starting from a greedy independent subset.
    """
    H = pairing or HeightPairing(E)
    torsion = [P for P in sections if not P.is_zero() and H.height(P) == 0]
    basis, G = independent_subset(E, sections, H)
    r = len(basis)
    if r:
        for P in sections:
            if H.height(P) == 0:
                continue
            rhs = [H.pairing(P, b) for b in basis]
            coords = solve(G, rhs)
            if all(c.denominator == 1 for c in coords):
                continue
            den = 1
            for c in coords:
                den = lcm(den, c.denominator)
            M = [[den if i == j else 0 for j in range(r)] for i in range(r)] + [[int(c * den) for c in coords]]
            Hm, U = hnf(M)
            new = []
            for i in range(r):
                row = U[i]
                new.append(_combine(E, row, basis + [P]))
            basis = new
            G = [[H.pairing(a, b) for b in basis] for a in basis]
        T, G2, k = lll(G)
        basis = [_combine(E, row, basis) for row in T[k:]]
        G = [[H.pairing(a, b) for b in basis] for a in basis]
    inv = torsion_invariants(E, torsion)
    if E.chi == 1 and not mw_shape_check(r, inv):
        raise AssertionError("Mordell-Weil shape outside the classification")
    return basis, G, torsion, inv


def torsion_invariants(E, torsion):
    """Invariant factors of the group formed by O and the given torsion sections."""
    n = len({P.key() for P in torsion}) + 1
    if n == 1:
        return ()
    exp = 1
    for P in torsion:
        o = torsion_order(E, P, 12)
        if o is None:
            raise AssertionError("height-zero section of large order")
        exp = lcm(exp, o)
    if exp == n:
        return (n,)
    return (n // exp, exp)


# ---------------------------------------------------------------------------
# specialization oracle
# ---------------------------------------------------------------------------


def _ec_add(P, Q, a, p_inf=None):
    """Short Weierstrass addition y^2 = x^3 + A x + B over a field; None = O."""
    A = a
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _key_pt(K, P):
    return None if P is None else (K.key(P[0]), K.key(P[1]))


@dataclass
class SpecializationResult:
    lattice: list  # basis of the intersected relation lattice
    candidates: list  # short vectors reported as candidate relations
    rank_lower_bound: int
    samples: list
    notes: list


def specialization_oracle(E: WeierstrassModel, sections, taus=None, max_samples=8, short_norm=200, group_bound=10**4):
    """Necessary-condition check for independence by specializing at t = tau."""
    K = sections[0].x.ring if sections and not sections[0].is_zero() else E.ring
    if not isinstance(K, FiniteField):
        raise TypeError("specialization needs sections over F_q")
    if K.q > group_bound:
        raise ValueError("field too large for naive group computation")
    EK = E.extend(K, E.ring.embedding_into(K)) if E.ring != K else E
    S, T = _short(EK)
    secs = [T(P) for P in sections]
    r = len(secs)
    delta = S.invariants().delta
    if taus is None:
        taus = list(K.elements())
    lattice = None
    notes = []
    used = []
    for tau in taus:
        if len(used) >= max_samples:
            break
        if delta(tau) == 0:
            notes.append(f"skipped singular tau={K.key(tau)}")
            continue
        A, B = S.a4(tau), S.a6(tau)
        pts = []
        ok = True
        for P in secs:
            if P.is_zero():
                pts.append(None)
                continue
            dx = P.x.den(tau)
            if dx == 0:
                pts.append(None)  # reduces to O
                continue
            pts.append((P.x(tau), P.y(tau)))
        rel = _relations(K, pts, A)
        used.append(tau)
        lattice = rel if lattice is None else lattice_intersection(lattice, rel)
    if lattice is None:
        return SpecializationResult([], [], 0, [], notes)
    # report short vectors of the (LLL-reduced) intersection
    Gs = [[sum(a * b for a, b in zip(u, v)) for v in lattice] for u in lattice]
    Tm, _, _ = lll(Gs)
    red = [[sum(c * lattice[i][j] for i, c in enumerate(row)) for j in range(r)] for row in Tm]
    cands = [v for v in red if 0 < sum(x * x for x in v) <= short_norm]
    rk = mat_rank([[Fraction(x) for x in v] for v in cands]) if cands else 0
    return SpecializationResult(lattice, cands, r - rk, [K.key(t) for t in used], notes)


def _short(E):
    from .weierstrass import short_form

    return short_form(E)


def _relations(K, pts, A):
    """Relation lattice of points in E(F_q) by breadth-first search."""
    r = len(pts)
    start = None
    seen = {_key_pt(K, start): (start, (0,) * r)}
    queue = [start]
    rels = []
    while queue:
        nxt = []
        for P in queue:
            vec = seen[_key_pt(K, P)][1]
            for i, g in enumerate(pts):
                Q = _ec_add(P, g, A)
                v2 = list(vec)
                v2[i] += 1
                kq = _key_pt(K, Q)
                if kq in seen:
                    d = [a - b for a, b in zip(v2, seen[kq][1])]
                    if any(d):
                        rels.append(d)
                else:
                    seen[kq] = (Q, tuple(v2))
                    nxt.append(Q)
        queue = nxt
    if not rels:
        return [[1 if i == j else 0 for j in range(r)] for i in range(r)] if r else []
    H, _ = hnf(rels)
    return [row for row in H if any(row)]


# ---------------------------------------------------------------------------
# good primes
# ---------------------------------------------------------------------------


def choose_good_prime(E: WeierstrassModel, avoid=(), start: int = 5, limit: int = 10**5) -> int:
    """Smallest p >= start keeping denominators, Delta's ends and fibre types.

    ``avoid`` holds extra integers (for example discriminants of splitting
    data) that p must not divide.
    """
    if not isinstance(E.ring, RationalField):
        raise TypeError("choose_good_prime needs a model over Q")
    delta = E.invariants().delta
    ref = _geometric_symbols(fibre_inventory(E))
    den = 1
    for c in E.a:
        for x in c.coeffs:
            den = lcm(den, x.denominator)
    ends = [delta.lc, next(c for c in delta.coeffs if c != 0)]
    p = max(start, 5) - 1
    while p < limit:
        p = next_prime(p)
        if den % p == 0:
            continue
        if any(Fraction(e).numerator % p == 0 for e in ends):
            continue
        if any(int(a) % p == 0 for a in avoid if a):
            continue
        Fp = GF(p)
        try:
            Ep = E.extend(Fp, Fp)
            if _geometric_symbols(fibre_inventory(Ep)) != ref:
                continue
        except (ValueError, ZeroDivisionError):
            continue
        return p
    raise RuntimeError("no good prime below the limit")


def _geometric_symbols(fibres):
    out = []
    for F in fibres:
        if F.symbol != "I0":
            out.extend([F.symbol] * F.place.degree)
    return sorted(out)
