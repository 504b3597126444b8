"""The Galois action on a Mordell-Weil lattice.

Sections are handled through their coordinates in a rational basis given
by an independent subset, so every pairing is read off one fixed Gram
matrix.  An element of the group acts by permuting sections.  rho(g) is the
integer matrix whose i-th column holds the coordinates of g(b_i) in the basis
b, obtained as Gram^-1 <g b_i, b_j>.

Characters are split into irreducibles with Dixon's method: joint
eigenvectors of the class multiplication matrices over F_l, l = 1 mod exp(G).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .exactalg.fields import GF, QQ, is_prime
from .exactalg.matrix import hnf, inverse, lll, solve
from .sections import HeightPairing, _sections_from_coords, choose_good_prime, coefficient_system, search_via_ideal
from .splitfield import (
    BadPrime,
    choose_prime,
    compose,
    composition_table,
    group_name,
    splitting_field,
)

DIXON_BOUND = 400


class RepresentationError(ArithmeticError):
    pass


@dataclass
class MWRepresentation:
    basis: list
    gram: list
    group: list  # permutations (identity first)
    matrices: list  # one integer matrix per group element
    table: list = None
    group_label: str = ""
    notes: dict = field(default_factory=dict)

    @property
    def rank(self):
        return len(self.basis)


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def _det_int(M):
    from .exactalg.matrix import det

    return det(M) if M else 1


def mw_representation(basis, pairing, group, act, table=None, label="") -> MWRepresentation:
    """rho for a group acting on sections.

    ``pairing(P, Q)`` is the height pairing, ``act(g, P)`` the image of P
    under the group element g (an entry of ``group``).
    """
    r = len(basis)
    G = [[Fraction(pairing(a, b)) for b in basis] for a in basis]
    if r and _det_int(G) == 0:
        raise RepresentationError("basis is dependent")
    Ginv = inverse(G) if r else []
    mats = []
    for g in group:
        cols = []
        for b in basis:
            img = act(g, b)
            rhs = [Fraction(pairing(img, c)) for c in basis]
            x = [sum(Ginv[i][j] * rhs[j] for j in range(r)) for i in range(r)]
            if any(v.denominator != 1 for v in x):
                raise RepresentationError("basis does not generate")
            cols.append([int(v) for v in x])
        mats.append(_transpose(cols) if r else [])
    rep = MWRepresentation(list(basis), G, list(group), mats, table, label)
    verify_representation(rep)
    return rep


def verify_representation(rep: MWRepresentation):
    """Gram invariance and det = +-1 for every element, homomorphism on the table."""
    G = rep.gram
    for M in rep.matrices:
        if not M:
            continue
        if _matmul(_matmul(_transpose(M), G), M) != G:
            raise RepresentationError("matrix does not preserve the pairing")
        if abs(_det_int(M)) != 1:
            raise RepresentationError("matrix is not unimodular")
    if rep.table is not None and rep.rank:
        gens = _generators(rep.group)
        for a in gens:
            for b in range(len(rep.group)):
                c = rep.table[a][b]
                if _matmul(rep.matrices[a], rep.matrices[b]) != rep.matrices[c]:
                    raise RepresentationError("not a homomorphism")
    return True


def _generators(perms):
    """Indices of a small generating set (greedy)."""
    from .splitfield import _closure

    if len(perms) <= 1:
        return [0] if perms else []
    deg = len(perms[0])
    chosen = []
    span = {tuple(range(deg))}
    for k, g in enumerate(perms):
        if g not in span:
            chosen.append(k)
            span = _closure([perms[i] for i in chosen], deg)
            if len(span) == len(perms):
                break
    return chosen


# ---------------------------------------------------------------------------
# conjugacy classes and characters
# ---------------------------------------------------------------------------


def _inv(pi):
    out = [0] * len(pi)
    for i, j in enumerate(pi):
        out[j] = i
    return tuple(out)


def conjugacy_classes(perms):
    """Classes as lists of indices; the identity class first, then by size and order."""
    idx = {g: k for k, g in enumerate(perms)}
    seen = {}
    classes = []
    for k, g in enumerate(perms):
        if g in seen:
            continue
        cls = set()
        for h in perms:
            cls.add(compose(compose(h, g), _inv(h)))
        members = sorted(idx[c] for c in cls)
        for c in cls:
            seen[c] = len(classes)
        classes.append(members)
    ident = tuple(range(len(perms[0])))
    classes.sort(key=lambda c: (perms[c[0]] != ident, _order(perms[c[0]]), len(c), c[0]))
    return classes


def _order(pi):
    e = tuple(range(len(pi)))
    k, cur = 1, pi
    while cur != e:
        cur = compose(pi, cur)
        k += 1
    return k


@dataclass
class CharacterData:
    classes: list  # lists of group indices
    character: list  # trace per class
    kernel: list  # group indices acting trivially
    faithful: bool
    class_labels: list = field(default_factory=list)


def character_and_faithfulness(rep: MWRepresentation) -> CharacterData:
    classes = conjugacy_classes(rep.group)
    traces = []
    for c in classes:
        tr = {sum(rep.matrices[k][i][i] for i in range(rep.rank)) for k in c}
        if len(tr) != 1:
            raise RepresentationError("character is not a class function")
        traces.append(tr.pop())
    ident = [[int(i == j) for j in range(rep.rank)] for i in range(rep.rank)]
    kernel = [k for k, M in enumerate(rep.matrices) if M == ident]
    labels = [f"{len(c)}x{_order(rep.group[c[0]])}" for c in classes]
    return CharacterData(classes, traces, kernel, len(kernel) == 1, labels)


# ---------------------------------------------------------------------------
# Dixon's character table mod l
# ---------------------------------------------------------------------------


def _dixon_prime(exponent, order):
    ell = exponent * ((1 << 20) // exponent + 1) + 1
    while not is_prime(ell) or ell <= 4 * order:
        ell += exponent
    return ell


def character_table_mod(perms, classes, seed=11):
    """(l, table) with table[i][r] = chi_i(g_r) mod l for all irreducible chi_i."""
    n = len(perms)
    h = len(classes)
    idx = {g: k for k, g in enumerate(perms)}
    cls_of = {}
    for r, c in enumerate(classes):
        for k in c:
            cls_of[k] = r
    exp = 1
    for c in classes:
        exp = math.lcm(exp, _order(perms[c[0]]))
    ell = _dixon_prime(exp, n)
    # A_j[r][s] = #{x in C_j : x^-1 z_s in C_r}
    mats = []
    for j in range(h):
        A = [[0] * h for _ in range(h)]
        for s in range(h):
            z = perms[classes[s][0]]
            for k in classes[j]:
                y = compose(_inv(perms[k]), z)
                A[cls_of[idx[y]]][s] += 1
        mats.append(A)
    rng = random.Random(seed)
    vecs = None
    for _ in range(20):
        coeffs = [rng.randrange(1, ell) for _ in range(h)]
        M = [[sum(coeffs[j] * mats[j][r][s] for j in range(h)) % ell for s in range(h)] for r in range(h)]
        Mf = flint.nmod_mat(M, ell)
        cp = Mf.charpoly()
        roots = cp.roots()
        if len(roots) != h or any(e != 1 for _, e in roots):
            continue
        vecs = []
        for lam, _ in roots:
            lamI = flint.nmod_mat([[int(lam) if i == j else 0 for j in range(h)] for i in range(h)], ell)
            X, nul = (Mf - lamI).nullspace()
            v = [int(X[i, 0]) for i in range(h)]
            inv0 = pow(v[0], -1, ell)
            vecs.append([x * inv0 % ell for x in v])
        break
    if vecs is None:
        raise RepresentationError("no separating class combination found")
    inv_cls = [cls_of[idx[_inv(perms[c[0]])]] for c in classes]
    sizes = [len(c) for c in classes]
    table = []
    for w in vecs:
        s = sum(w[r] * w[inv_cls[r]] * pow(sizes[r], -1, ell) for r in range(h)) % ell
        d2 = n * pow(s, -1, ell) % ell
        d = math.isqrt(d2)
        if d * d != d2:
            raise RepresentationError("character degree is not a square root")
        table.append([w[r] * d * pow(sizes[r], -1, ell) % ell for r in range(h)])
    table.sort(key=lambda row: (row[0], row))
    return ell, table


def _sym(v, m):
    v %= m
    return v - m if v > m // 2 else v


@dataclass
class Decomposition:
    multiplicities: list  # per absolutely irreducible character (mod l table)
    degrees: list
    rational: list  # (rational character values, degree, multiplicity) for orbit sums with m > 0
    partial: bool = False
    note: str = ""


def decompose(rep: MWRepresentation, bound=DIXON_BOUND) -> Decomposition:
    ch = character_and_faithfulness(rep)
    n = len(rep.group)
    if n > bound:
        return Decomposition([], [], [(ch.character, rep.rank, 1)], True, f"|G| = {n} above bound {bound}: character only")
    ell, table = character_table_mod(rep.group, ch.classes)
    perms = rep.group
    idx = {g: k for k, g in enumerate(perms)}
    cls_of = {}
    for r, c in enumerate(ch.classes):
        for k in c:
            cls_of[k] = r
    inv_cls = [cls_of[idx[_inv(perms[c[0]])]] for c in ch.classes]
    sizes = [len(c) for c in ch.classes]
    ninv = pow(n, -1, ell)
    mult = []
    degs = []
    for row in table:
        m = sum(sizes[r] * ch.character[r] * row[inv_cls[r]] for r in range(len(sizes))) * ninv % ell
        m = _sym(m, ell)
        if m < 0:
            raise RepresentationError("negative multiplicity")
        mult.append(m)
        degs.append(row[0])
    if sum(m * d for m, d in zip(mult, degs)) != rep.rank:
        raise RepresentationError("dimension bookkeeping failed")
    # Galois orbits: chi -> (g -> chi(g^k))
    exp = 1
    for c in ch.classes:
        exp = math.lcm(exp, _order(perms[c[0]]))
    power_cls = {}
    for k in range(1, exp + 1):
        if math.gcd(k, exp) != 1:
            continue
        pm = []
        for c in ch.classes:
            g = perms[c[0]]
            gk = tuple(range(len(g)))
            for _ in range(k):
                gk = compose(g, gk)
            pm.append(cls_of[idx[gk]])
        power_cls[k] = pm
    rows = [tuple(r) for r in table]
    done = set()
    rational = []
    for i, row in enumerate(rows):
        if i in done:
            continue
        orbit = {tuple(row[pm[r]] for r in range(len(row))) for pm in power_cls.values()}
        members = [j for j, other in enumerate(rows) if other in orbit]
        done.update(members)
        if mult[i] == 0:
            continue
        vals = [_sym(sum(rows[j][r] for j in members), ell) for r in range(len(row))]
        rational.append((vals, degs[i] * len(members), mult[i]))
    return Decomposition(mult, degs, rational)


# ---------------------------------------------------------------------------
# lattices of sections given by coordinates
# ---------------------------------------------------------------------------


@dataclass
class SectionLattice:
    """All sections in rational coordinates over an independent subset."""

    sections: list
    coords: list  # per section: Fractions over the independent subset
    gram_indep: list
    basis_vectors: list = field(default_factory=list)  # integer combinations of sections

    def coord(self, vec):
        r = len(self.gram_indep)
        out = [Fraction(0)] * r
        for k, w in enumerate(vec):
            if w:
                for i in range(r):
                    out[i] += w * self.coords[k][i]
        return out

    def pair_coords(self, a, b):
        G = self.gram_indep
        r = len(G)
        return sum(a[i] * G[i][j] * b[j] for i in range(r) for j in range(r))

    def pairing(self, u, v):
        return self.pair_coords(self.coord(u), self.coord(v))


def section_lattice(E, sections, pairing: HeightPairing | None = None) -> SectionLattice:
    """Coordinates of every section and an LLL-reduced Z-basis of their span."""
    H = pairing or HeightPairing(E)
    indep = []
    Gi = []
    for P in sections:
        if H.height(P) == 0:
            continue
        row = [H.pairing(P, Q) for Q in indep]
        cand = [r + [x] for r, x in zip(Gi, row)] + [row + [H.height(P)]]
        if _det_int(cand) != 0:
            indep.append(P)
            Gi = cand
    r = len(indep)
    coords = []
    for P in sections:
        if r == 0 or H.height(P) == 0:
            coords.append([Fraction(0)] * r)
            continue
        rhs = [H.pairing(P, Q) for Q in indep]
        coords.append(solve(Gi, rhs))
    L = SectionLattice(list(sections), coords, Gi)
    if r == 0:
        return L
    den = 1
    for c in coords:
        for x in c:
            den = math.lcm(den, x.denominator)
    M = [[int(x * den) for x in c] for c in coords]
    Hm, U = hnf(M)
    vecs = [U[i] for i in range(len(M)) if any(Hm[i])]
    if len(vecs) != r:
        raise RepresentationError("lattice of unexpected rank")
    G = [[L.pairing(a, b) for b in vecs] for a in vecs]
    T, _, k = lll(G)
    L.basis_vectors = [[sum(t[i] * vecs[i][s] for i in range(r)) for s in range(len(sections))] for t in T[k:]]
    return L


def permutation_action():
    """act(g, vec) for g a permutation of section indices."""

    def act(g, vec):
        out = [0] * len(vec)
        for k, w in enumerate(vec):
            if w:
                out[g[k]] += w
        return out

    return act


# ---------------------------------------------------------------------------
# the pipeline over Q
# ---------------------------------------------------------------------------


@dataclass
class GaloisRepResult:
    rank: int
    representation: MWRepresentation
    characters: CharacterData
    decomposition: Decomposition
    field_degree: int
    group_name: str
    prime: int
    section_count: int
    notes: dict = field(default_factory=dict)


def _reduce_model(E, p):
    Fp = GF(p)
    return E.extend(Fp, Fp)


def galois_representation(E, max_degree=240, start_prime=5, ideal=None) -> GaloisRepResult:
    """Galois representation on the lattice spanned by the integral sections of E over Q."""
    if E.ring != QQ:
        raise TypeError("model over Q required")
    res = ideal or search_via_ideal(E)
    if res.rur is None or res.count == 0:
        raise RepresentationError("no integral sections")
    mu = res.rur.mu
    from .exactalg.factor import factor_q

    facs = [g for g, _ in factor_q(mu)]
    den = 1
    for R in res.rur.coords:
        for c in R.coeffs:
            den = math.lcm(den, Fraction(c).denominator)
    p = start_prime
    while True:
        p = choose_prime(facs, start=p)
        q = choose_good_prime(E, start=p)
        if q == p and den % p:
            try:
                K, data, (facs2, _owner, scaled) = splitting_field(facs, p, max_degree)
                break
            except BadPrime:
                q = p + 1
        p = max(q, p + 1)
    Ep = _reduce_model(E, p)
    Fp = Ep.ring
    _, _, xdeg, _ = coefficient_system(E)
    store = data.store
    vals = store.values(1)
    red = [R.map(Fp, lambda c: Fp(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p) % p)) for R in res.rur.coords]
    sections = []
    for fi, (a, _cs) in enumerate(scaled):
        for k in store.members[fi]:
            lam = vals[k] * pow(a, -1, p) % p
            coords = [Rp(lam) for Rp in red]
            sections.append(_sections_from_coords(Ep, coords, xdeg, Fp, E.var))
    H = HeightPairing(Ep)
    L = section_lattice(Ep, sections, H)
    group = list(data.perms)
    table = composition_table(group)
    act = permutation_action()
    name = group_name(group)
    rep = mw_representation(L.basis_vectors, L.pairing, group, act, table, name)
    ch = character_and_faithfulness(rep)
    dec = decompose(rep)
    return GaloisRepResult(len(L.basis_vectors), rep, ch, dec, K.degree, name, p, len(sections))
