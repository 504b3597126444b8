"""Groebner bases (Buchberger) and zero-dimensional solving over Q and F_q.

MultiPoly stores a dict from exponent tuples to coefficients.  Coefficients
are elements of the ring descriptor (Fractions over Q, nmod / fq_default over
finite fields), so one code path serves every field.

Zero-dimensional tools work through the quotient algebra: the staircase of
the reduced basis, multiplication matrices, and minimal polynomials of
multiplication maps (eliminants).  Points over the algebraic closure of F_q
are found by a triangular recursion: factor the eliminant of the first
variable, adjoin one root of each factor, specialize and recurse; conjugate
points come from Frobenius.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .exactalg.factor import factor_fq, factor_q, roots_fq
from .exactalg.fields import GF, QQ, FieldHom, FiniteField, RationalField
from .exactalg.poly import Poly

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class NotZeroDimensional(ValueError):
    def __init__(self, msg="not zero-dimensional"):
        super().__init__(msg)


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


def _order_key(order: str, n: int):
    if order == "lex":
        return lambda e: e
    if order == "grevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"unknown monomial order {order!r}")


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial in named variables over QQ or a finite field."""

    __slots__ = ("ring", "vars", "terms")

    def __init__(self, ring, variables, terms=None):
        self.ring = ring
        self.vars = tuple(variables)
        t = {}
        if terms:
            for e, c in terms.items():
                if len(e) != len(self.vars):
                    raise ValueError("exponent vector length mismatch")
                if c != 0:
                    t[tuple(e)] = c
        self.terms = t

    @classmethod
    def var(cls, ring, variables, name):
        i = list(variables).index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(ring, variables, {tuple(e): ring(1)})

    @classmethod
    def const(cls, ring, variables, c):
        return cls(ring, variables, {(0,) * len(variables): ring(c)})

    def _wrap(self, terms):
        out = MultiPoly.__new__(MultiPoly)
        out.ring, out.vars, out.terms = self.ring, self.vars, terms
        return out

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars or other.ring != self.ring:
                raise TypeError("mixed coefficient fields or variable lists")
            return other
        return MultiPoly.const(self.ring, self.vars, other)

    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e)
            v = c if v is None else v + c
            if v == 0:
                t.pop(e, None)
            else:
                t[e] = v
        return self._wrap(t)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.ring(other)
            if c == 0:
                return self._wrap({})
            return self._wrap({e: v * c for e, v in self.terms.items()})
        o = self._coerce(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = _add(e1, e2)
                v = t.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                t[e] = v
        return self._wrap({e: c for e, c in t.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n):
        out = MultiPoly.const(self.ring, self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset((e, self.ring.key(c)) for e, c in self.terms.items())))

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def used_vars(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.vars[i])
        return used

    def leading(self, order="grevlex"):
        key = _order_key(order, len(self.vars))
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order="grevlex"):
        _, c = self.leading(order)
        inv = 1 / c
        return self._wrap({e: v * inv for e, v in self.terms.items()})

    def primitive(self, order="grevlex"):
        """Over Q: integer coefficients, content 1, positive leading coefficient."""
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, Fraction(c).denominator)
        ints = {e: int(Fraction(c) * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        _, lc = self.leading(order)
        s = -1 if lc < 0 else 1
        return self._wrap({e: Fraction(s * v // g) for e, v in ints.items()})

    def evaluate(self, point):
        acc = None
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            acc = term if acc is None else acc + term
        return acc if acc is not None else 0

    def specialize(self, index, value, new_ring=None, hom=None):
        """Substitute variable ``index`` by ``value`` (in new_ring), dropping it."""
        ring = new_ring or self.ring
        hom = hom or ring
        nv = self.vars[:index] + self.vars[index + 1 :]
        t = {}
        powers = {}
        for e, c in self.terms.items():
            k = e[index]
            if k not in powers:
                powers[k] = value**k if k else ring(1)
            v = hom(c) * powers[k]
            ne = e[:index] + e[index + 1 :]
            w = t.get(ne)
            t[ne] = v if w is None else w + v
        return MultiPoly(ring, nv, t)

    def map_coeffs(self, ring, fn=None):
        fn = fn or ring
        return MultiPoly(ring, self.vars, {e: fn(c) for e, c in self.terms.items()})

    def embed(self, variables):
        """Same polynomial in a larger variable list."""
        pos = [variables.index(v) for v in self.vars]
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(pos, e):
                ne[i] = k
            t[tuple(ne)] = c
        return MultiPoly(self.ring, variables, t)

    def to_univariate(self, var_name=None):
        used = self.used_vars()
        if len(used) > 1:
            raise ValueError("not univariate")
        name = var_name or (next(iter(used)) if used else self.vars[0])
        i = self.vars.index(name)
        deg = max((e[i] for e in self.terms), default=0)
        cs = [self.ring(0)] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return Poly(self.ring, cs, name, _raw=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_order_key("grevlex", len(self.vars)), reverse=True):
            c = self.terms[e]
            mon = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def polynomial_ring(ring, names):
    """Convenience: MultiPoly generators for the given variable names."""
    names = tuple(names)
    return tuple(MultiPoly.var(ring, names, n) for n in names)


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


class _Basis:
    """Working basis with leading data cached."""

    def __init__(self, key):
        self.key = key
        self.polys = []  # dict terms
        self.lm = []
        self.lc = []
        self.alive = []

    def add(self, terms):
        e = max(terms, key=self.key)
        self.polys.append(terms)
        self.lm.append(e)
        self.lc.append(terms[e])
        self.alive.append(True)
        return len(self.polys) - 1

    def find_reducer(self, m):
        lm = self.lm
        for i in range(len(lm)):
            if self.alive[i] and _divides(lm[i], m):
                return i
        return None


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(
                f"reduction budget of {self.budget} steps exhausted; "
                "raise the budget or simplify the system"
            )


def _reduce(terms, basis: _Basis, key, counter, full=True, skip=None):
    """Normal form of ``terms`` w.r.t. the alive polynomials of basis."""
    f = dict(terms)
    heap = [(_neg(key(e)), e) for e in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.get(m)
        if c is None:
            continue
        del f[m]
        i = None
        lm = basis.lm
        for j in range(len(lm)):
            if basis.alive[j] and j != skip and _divides(lm[j], m):
                i = j
                break
        if i is None:
            if not full:
                rem[m] = c
                rem.update(f)
                return rem
            rem[m] = c
            continue
        counter.tick()
        g = basis.polys[i]
        q = c / basis.lc[i]
        shift = _sub(m, basis.lm[i])
        for e, v in g.items():
            ne = _add(e, shift)
            if ne == m:
                continue
            w = f.get(ne)
            if w is None:
                nv = -q * v
                f[ne] = nv
                heapq.heappush(heap, (_neg(key(ne)), ne))
            else:
                nv = w - q * v
                if nv == 0:
                    del f[ne]
                else:
                    f[ne] = nv
    return rem


def _neg(k):
    """Order-reversing wrapper so heapq pops the largest monomial first."""
    return _Rev(k)


class _Rev:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


@dataclass
class IdealBasis:
    generators: list
    order: str = "grevlex"
    is_groebner: bool = False
    variables: tuple = ()
    ring: object = None
    stats: dict = field(default_factory=dict)

    def is_unit(self):
        return self.is_groebner and len(self.generators) == 1 and all(
            sum(e) == 0 for e in self.generators[0].terms
        )

    def leading_monomials(self):
        return [g.leading(self.order)[0] for g in self.generators]

    def reduce(self, f: MultiPoly) -> MultiPoly:
        key = _order_key(self.order, len(self.variables))
        basis = _Basis(key)
        for g in self.generators:
            basis.add(g.terms)
        return MultiPoly(self.ring, self.variables, _reduce(f.terms, basis, key, _Counter(10**9)))

    def contains(self, f: MultiPoly) -> bool:
        return self.reduce(f).is_zero()


def buchberger(gens, order="grevlex", budget=DEFAULT_BUDGET) -> IdealBasis:
    """Reduced Groebner basis with the product and chain (Gebauer-Moeller) criteria."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("empty generator list")
    ring, variables = gens[0].ring, gens[0].vars
    for g in gens:
        if g.ring != ring or g.vars != variables:
            raise TypeError("mixed coefficient fields")
    n = len(variables)
    key = _order_key(order, n)
    counter = _Counter(budget)
    basis = _Basis(key)
    pairs = []  # heap of (lcm key, tiebreak, i, j, lcm)
    tie = itertools.count()

    def update(h):
        # Gebauer-Moeller installation of new polynomial index h
        lm_h = basis.lm[h]
        old = [i for i in range(h) if basis.alive[i]]
        cand = {i: _lcm(basis.lm[i], lm_h) for i in old}
        # chain criterion among new pairs
        keep = []
        for i in old:
            li = cand[i]
            coprime = all(a == 0 or b == 0 for a, b in zip(basis.lm[i], lm_h))
            keep.append((i, li, coprime))
        selected = []
        for idx, (i, li, cop) in enumerate(keep):
            redundant = False
            for jdx, (j, lj, copj) in enumerate(keep):
                if jdx == idx:
                    continue
                if _divides(lj, li) and (lj != li or jdx < idx):
                    if lj != li or not cop:
                        redundant = True
                        break
            if not redundant:
                selected.append((i, li, cop))
        # among equal lcms keep one; drop coprime (product criterion)
        seen = {}
        for i, li, cop in selected:
            if li in seen:
                if cop:
                    seen[li] = None
                continue
            seen[li] = None if cop else i
        new_pairs = [(i, li) for li, i in seen.items() if i is not None]
        # old pairs killed by the chain criterion through h
        surviving = []
        for item in pairs:
            _, _, i, j, lij = item
            if (
                _divides(lm_h, lij)
                and _lcm(basis.lm[i], lm_h) != lij
                and _lcm(basis.lm[j], lm_h) != lij
            ):
                continue
            surviving.append(item)
        pairs[:] = surviving
        heapq.heapify(pairs)
        for i, li in new_pairs:
            heapq.heappush(pairs, (key(li), next(tie), i, h, li))
        # drop basis elements whose lm is divisible by lm_h
        for i in old:
            if _divides(lm_h, basis.lm[i]):
                basis.alive[i] = False

    for g in sorted(gens, key=lambda g: key(g.leading(order)[0])):
        r = _reduce(g.terms, basis, key, counter)
        if r:
            h = basis.add(_make_monic(r, key))
            update(h)
            if sum(basis.lm[h]) == 0:
                return _unit(ring, variables, order)
    while pairs:
        _, _, i, j, lij = heapq.heappop(pairs)
        s = _spoly(basis, i, j, lij)
        r = _reduce(s, basis, key, counter)
        if r:
            h = basis.add(_make_monic(r, key))
            if sum(basis.lm[h]) == 0:
                return _unit(ring, variables, order)
            update(h)
    # minimal + reduced basis
    idx = [i for i in range(len(basis.polys)) if basis.alive[i]]
    minimal = []
    for i in idx:
        if any(
            j != i and _divides(basis.lm[j], basis.lm[i]) and (basis.lm[j] != basis.lm[i] or j < i)
            for j in idx
        ):
            continue
        minimal.append(i)
    red = _Basis(key)
    for i in minimal:
        red.add(basis.polys[i])
    out = []
    for k in range(len(red.polys)):
        r = _reduce(red.polys[k], red, key, counter, skip=k)
        out.append(_make_monic(r, key))
    polys = [MultiPoly(ring, variables, t) for t in out]
    polys.sort(key=lambda g: key(g.leading(order)[0]), reverse=True)
    return IdealBasis(polys, order, True, variables, ring, {"reductions": counter.steps})


def _unit(ring, variables, order):
    return IdealBasis([MultiPoly.const(ring, variables, 1)], order, True, variables, ring)


def _make_monic(terms, key):
    e = max(terms, key=key)
    c = terms[e]
    if c == 1:
        return terms
    inv = 1 / c
    return {m: v * inv for m, v in terms.items()}


def _spoly(basis, i, j, lij):
    fi, fj = basis.polys[i], basis.polys[j]
    si = _sub(lij, basis.lm[i])
    sj = _sub(lij, basis.lm[j])
    ci, cj = basis.lc[i], basis.lc[j]
    out = {}
    for e, v in fi.items():
        out[_add(e, si)] = v * cj
    for e, v in fj.items():
        ne = _add(e, sj)
        w = out.get(ne)
        nv = -v * ci if w is None else w - v * ci
        if nv == 0:
            out.pop(ne, None)
        else:
            out[ne] = nv
    out.pop(lij, None)
    return {e: c for e, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# zero-dimensional quotient algebra
# ---------------------------------------------------------------------------


def is_zero_dimensional(I: IdealBasis) -> bool:
    if not I.is_groebner:
        raise ValueError("need a Groebner basis")
    if I.is_unit():
        return True
    n = len(I.variables)
    seen = set()
    for e in I.leading_monomials():
        nz = [i for i in range(n) if e[i]]
        if len(nz) == 1:
            seen.add(nz[0])
    return len(seen) == n


def standard_monomials(I: IdealBasis):
    """Staircase (normal monomial basis) of a zero-dimensional ideal, sorted ascending."""
    if not is_zero_dimensional(I):
        raise NotZeroDimensional()
    if I.is_unit():
        return []
    n = len(I.variables)
    lms = I.leading_monomials()
    key = _order_key(I.order, n)
    out = []
    stack = [(0,) * n]
    seen = {stack[0]}
    while stack:
        m = stack.pop()
        if any(_divides(l, m) for l in lms):
            continue
        out.append(m)
        for i in range(n):
            e = list(m)
            e[i] += 1
            e = tuple(e)
            if e not in seen:
                seen.add(e)
                stack.append(e)
    out.sort(key=key)
    return out


class QuotientAlgebra:
    """F[x]/I for zero-dimensional I, with normal forms in the staircase basis."""

    def __init__(self, I: IdealBasis):
        self.I = I
        self.basis = standard_monomials(I)
        self.index = {m: k for k, m in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.key = _order_key(I.order, len(I.variables))
        self._red = _Basis(self.key)
        for g in I.generators:
            self._red.add(g.terms)
        self._counter = _Counter(10**12)
        self._nf_cache = {}

    def nf_vector(self, terms):
        r = _reduce(terms, self._red, self.key, self._counter)
        v = [self.I.ring(0)] * self.dim
        for e, c in r.items():
            v[self.index[e]] = c
        return v

    def _nf_monomial(self, m):
        v = self._nf_cache.get(m)
        if v is None:
            if m in self.index:
                v = {m: self.I.ring(1)}
            else:
                v = _reduce({m: self.I.ring(1)}, self._red, self.key, self._counter)
            self._nf_cache[m] = v
        return v

    def mult_matrix(self, f: MultiPoly):
        """Matrix (list of columns) of multiplication by f in the staircase basis.

        Column k holds the coordinates of NF(f * basis[k]).
        """
        cols = []
        R = self.I.ring
        for m in self.basis:
            acc = {}
            for e, c in f.terms.items():
                for mm, v in self._nf_monomial(_add(m, e)).items():
                    w = acc.get(mm)
                    acc[mm] = c * v if w is None else w + c * v
            col = [R(0)] * self.dim
            for mm, v in acc.items():
                col[self.index[mm]] = v
            cols.append(col)
        return cols


def _minpoly_generic(cols, ring):
    """Minimal polynomial of the matrix with the given columns (Krylov on all unit vectors)."""
    n = len(cols)

    def apply(v):
        out = [ring(0)] * n
        for k, vk in enumerate(v):
            if vk == 0:
                continue
            col = cols[k]
            for i in range(n):
                if col[i] != 0:
                    out[i] += vk * col[i]
        return out

    result = Poly(ring, [1])
    # the minimal polynomial is the lcm of the local minimal polynomials of e_i
    covered = _EchelonSpace(n, ring)
    for start in range(n):
        e = [ring(0)] * n
        e[start] = ring(1)
        # reduce e by result(M) first: if result(M) e == 0 skip
        w = _apply_poly(result, apply, e, ring)
        if all(x == 0 for x in w):
            continue
        mp = _local_minpoly(apply, w, n, ring)
        result = (result * mp) // result.gcd(mp)
        result = result.monic()
        if result.degree == n:
            break
    return result


def _apply_poly(P, apply, v, ring):
    acc = [ring(0)] * len(v)
    for c in reversed(P.coeffs):
        acc = apply(acc)
        acc = [a + c * b for a, b in zip(acc, v)]
    return acc


def _local_minpoly(apply, v, n, ring):
    """Monic polynomial P of least degree with P(M) v = 0."""
    space = _EchelonSpace(n, ring)
    cur = v
    k = 0
    while True:
        coeffs = space.try_express(cur)
        if coeffs is not None:
            # cur = sum coeffs_i M^i v
            return Poly(ring, [-c for c in coeffs] + [1])
        space.add(cur)
        cur = apply(cur)
        k += 1


class _EchelonSpace:
    """Incremental echelon form tracking combinations of added vectors."""

    def __init__(self, n, ring):
        self.n, self.ring = n, ring
        self.rows = []  # (pivot, reduced vector, combination)
        self.count = 0

    def _reduce(self, v):
        v = list(v)
        comb = [self.ring(0)] * self.count
        for piv, row, rc in self.rows:
            c = v[piv]
            if c != 0:
                v = [a - c * b for a, b in zip(v, row)]
                for i, x in enumerate(rc):
                    comb[i] -= c * x
        return v, comb

    def try_express(self, v):
        r, comb = self._reduce(v)
        if any(x != 0 for x in r):
            return None
        return [-c for c in comb]

    def add(self, v):
        r, comb = self._reduce(v)
        piv = next(i for i, x in enumerate(r) if x != 0)
        inv = 1 / r[piv]
        r = [x * inv for x in r]
        comb = [c * inv for c in comb] + [inv]
        self.rows = [(p, row, rc + [self.ring(0)]) for p, row, rc in self.rows]
        # keep rows fully reduced w.r.t. the new pivot
        new_rows = []
        for p, row, rc in self.rows:
            c = row[piv]
            if c != 0:
                row = [a - c * b for a, b in zip(row, r)]
                rc = [a - c * b for a, b in zip(rc, comb)]
            new_rows.append((p, row, rc))
        new_rows.append((piv, r, comb))
        self.rows = new_rows
        self.count += 1


def minpoly_of_matrix(cols, ring) -> Poly:
    """Minimal polynomial of a square matrix given by columns over QQ or GF(q)."""
    n = len(cols)
    if n == 0:
        return Poly(ring, [1])
    if isinstance(ring, RationalField):
        M = flint.fmpq_mat(n, n, [flint.fmpq(cols[j][i].numerator, cols[j][i].denominator) for i in range(n) for j in range(n)])
        mp = M.minpoly()
        return Poly(QQ, [Fraction(int(c.p), int(c.q)) for c in mp.coeffs()])
    if isinstance(ring, FiniteField) and ring.k == 1:
        M = flint.nmod_mat(n, n, [int(cols[j][i]) for i in range(n) for j in range(n)], ring.p)
        mp = M.minpoly()
        return Poly(ring, [int(c) for c in mp.coeffs()])
    return _minpoly_generic(cols, ring)


def eliminant(I: IdealBasis, name: str, A: QuotientAlgebra | None = None) -> Poly:
    """Monic generator of I intersected with F[name] (zero-dimensional I)."""
    A = A or QuotientAlgebra(I)
    f = MultiPoly.var(I.ring, I.variables, name)
    P = minpoly_of_matrix(A.mult_matrix(f), I.ring)
    return P.change_var(name)


def eliminate(I: IdealBasis, keep) -> IdealBasis:
    """Generators of the elimination ideal in the kept variables.

    Requires a lex basis whose eliminated variables precede the kept ones,
    or (for a single kept variable of a zero-dimensional ideal) any order.
    """
    keep = list(keep)
    if not I.is_groebner:
        raise ValueError("need a Groebner basis")
    vs = list(I.variables)
    pos = sorted(vs.index(k) for k in keep)
    if I.order != "lex" or pos != list(range(len(vs) - len(keep), len(vs))):
        if len(keep) == 1 and is_zero_dimensional(I):
            P = eliminant(I, keep[0])
            g = _univariate_to_multi(P, I.ring, (keep[0],))
            return IdealBasis([g], "lex", True, (keep[0],), I.ring)
        raise ValueError("order mismatch: need lex with eliminated variables first")
    kept = tuple(vs[i] for i in pos)
    gens = []
    for g in I.generators:
        if g.used_vars() <= set(kept):
            t = {tuple(e[i] for i in pos): c for e, c in g.terms.items()}
            gens.append(MultiPoly(I.ring, kept, t))
    if not gens:
        gens = [MultiPoly(I.ring, kept, {})]
    return IdealBasis(gens, "lex", True, kept, I.ring)


def _univariate_to_multi(P: Poly, ring, variables):
    return MultiPoly(ring, variables, {(i,): c for i, c in enumerate(P.coeffs) if c != 0})


# ---------------------------------------------------------------------------
# varieties over finite fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FqPoint:
    """A point over F_{p^K}: coordinates, the field, and its degree over the base F_q."""

    coords: tuple
    field: FiniteField
    degree: int

    def key(self):
        return tuple(self.field.key(c) for c in self.coords)


def _canonical_hom(base: FiniteField, E: FiniteField) -> FieldHom:
    return base.embedding_into(E)


def _extension(F: FiniteField, d: int, base: FiniteField, hom_base_F: FieldHom):
    """Degree-d extension E of F with an embedding F -> E compatible on base."""
    E = GF(F.p, F.k * d)
    canon = _canonical_hom(base, E)
    h = F.embedding_into(E, compatible_with=(hom_base_F, canon))
    return E, h


def variety_fq(I: IdealBasis, budget=DEFAULT_BUDGET):
    """All points of V(I) over the algebraic closure of the base field F_q.

    Returns a list of FqPoint sorted by (degree, field degree, key).  Each
    point is listed once; coordinates of a degree-d point lie in a field
    containing F_{q^d} (canonically embedded base field).
    """
    F = I.ring
    if not isinstance(F, FiniteField):
        raise TypeError("variety_fq needs an ideal over a finite field")
    G = I if I.is_groebner else buchberger(I.generators, "grevlex", budget)
    if G.is_unit():
        return []
    if not is_zero_dimensional(G):
        raise NotZeroDimensional()
    ident = FieldHom(F, F, F.gen() if F.k > 1 else None)
    raw = _solve(G.generators, F, F, ident, budget)
    q0 = F.q
    out = []
    for coords, E, _ in raw:
        d = _orbit_size(coords, E, q0)
        out.append(FqPoint(tuple(coords), E, d))
    out.sort(key=lambda P: (P.degree, P.field.k, P.key()))
    return out


def _frob_point(coords, E, q):
    return tuple(c**q for c in coords)


def _orbit_size(coords, E, q):
    d = 1
    cur = _frob_point(coords, E, q)
    while cur != tuple(coords):
        cur = _frob_point(cur, E, q)
        d += 1
    return d


def _ident(F):
    return FieldHom(F, F, F.gen() if F.k > 1 else None)


def _solve(gens, F, base, hom_base_F, budget):
    """Points of V(gens) over closure of F as (coords, field E, embedding F -> E).

    The embedding is the one actually used to specialize coefficients, so
    callers can move their own coordinates into E consistently.
    """
    if not gens:
        raise NotZeroDimensional()
    variables = gens[0].vars
    G = buchberger(gens, "grevlex", budget)
    if G.is_unit():
        return []
    if not variables:
        return [((), F, _ident(F))]
    if not is_zero_dimensional(G):
        raise NotZeroDimensional()
    name = variables[0]
    A = QuotientAlgebra(G)
    mu = eliminant(G, name, A)
    out = []
    for phi, _ in factor_fq(mu.change_var("t")):
        d = phi.degree
        if d == 1:
            E, h = F, _ident(F)
            rho = -phi.coeffs[0]
        else:
            E, h = _extension(F, d, base, hom_base_F)
            phiE = Poly(E, [h(c) for c in phi.coeffs])
            rho = roots_fq(phiE)[0]
        hom_base_E = h.compose(hom_base_F) if F.k > 1 or base.k > 1 else _canonical_hom(base, E)
        spec = [g.specialize(0, rho, E, h) for g in G.generators]
        spec = [s for s in spec if not s.is_zero()]
        if not spec:
            spec = [MultiPoly(E, variables[1:], {})]
        if len(variables) == 1:
            sub = [((), E, _ident(E))]
        else:
            sub = _solve(spec, E, base, hom_base_E, budget) if spec[0].terms or len(spec) > 1 else None
            if sub is None:
                raise NotZeroDimensional()
        qF = F.q
        for coords, E2, emb in sub:
            pt = (emb(rho),) + tuple(coords)
            hF = emb.compose(h)
            for i in range(d):
                out.append((pt, E2, hF))
                pt = _frob_point(pt, E2, qF)
    return out


def embed_point(P: FqPoint, base: FiniteField, target: FiniteField):
    """Embed a point into a larger field, compatibly with the base field."""
    if P.field == target:
        return P.coords
    emb = P.field.embedding_into(
        target, compatible_with=(_canonical_hom(base, P.field), _canonical_hom(base, target))
    )
    return tuple(emb(c) for c in P.coords)


# ---------------------------------------------------------------------------
# rational univariate representation over Q
# ---------------------------------------------------------------------------


@dataclass
class RUR:
    """Points of a radical zero-dimensional ideal over Q.

    ``form`` gives integer weights of the separating linear form l,
    ``mu`` its minimal polynomial, and ``coords[i]`` a polynomial R_i with
    x_i = R_i(l) at every point.
    """

    variables: tuple
    form: tuple
    mu: Poly
    coords: list
    dim: int


def coordinate_eliminants(I: IdealBasis):
    """Squarefree eliminant of each variable (dict name -> Poly over Q)."""
    A = QuotientAlgebra(I)
    out = {}
    for v in I.variables:
        P = eliminant(I, v, A)
        out[v] = (P // P.gcd(P.derivative())).monic()
    return out


def radical(I: IdealBasis, budget=DEFAULT_BUDGET) -> IdealBasis:
    """Radical of a zero-dimensional ideal (Seidenberg: add squarefree eliminants)."""
    G = I if I.is_groebner else buchberger(I.generators, "grevlex", budget)
    if G.is_unit():
        return G
    A = QuotientAlgebra(G)
    extra = []
    for v in G.variables:
        P = eliminant(G, v, A)
        sq = _squarefree(P)
        if sq.degree < P.degree:
            extra.append(_univariate_to_multi(sq, G.ring, (v,)).embed(G.variables))
    if not extra:
        return G
    return buchberger(list(G.generators) + extra, G.order, budget)


def _squarefree(P: Poly) -> Poly:
    if isinstance(P.ring, FiniteField):
        out = Poly(P.ring, [1], P.var)
        for phi, _ in factor_fq(P):
            out = out * phi
        return out
    return (P // P.gcd(P.derivative())).monic()


def rational_univariate_representation(I: IdealBasis, tries=20) -> RUR:
    """RUR over Q via multiplication matrices and a separating form.

    Non-radical input is replaced by its radical first.
    """
    if I.ring != QQ:
        raise TypeError("RUR implemented over Q")
    G = radical(I)
    if G.is_unit():
        return RUR(G.variables, (), Poly(QQ, [1]), [], 0)
    A = QuotientAlgebra(G)
    n = len(G.variables)
    D = A.dim
    xs = [MultiPoly.var(QQ, G.variables, v) for v in G.variables]
    mats = [A.mult_matrix(x) for x in xs]
    weights = [0] * n
    import random

    rng = random.Random(7)
    for attempt in range(tries):
        if attempt == 0:
            weights = [1] + [0] * (n - 1) if n == 1 else [1] + [rng.randint(-3, 3) for _ in range(n - 1)]
        else:
            weights = [rng.randint(-9, 9) for _ in range(n)]
        L = [[sum(w * m[j][i] for w, m in zip(weights, mats)) for i in range(D)] for j in range(D)]
        mu = minpoly_of_matrix(L, QQ)
        if mu.degree == D and mu.is_squarefree():
            break
    else:
        raise ValueError("no separating form found (ideal may not be radical)")
    # Krylov basis of 1 under L: v_k = L^k e_0 ; solve x_i * 1 = sum c_k v_k
    e0 = [Fraction(0)] * D
    e0[A.index[(0,) * n]] = Fraction(1)
    Kcols = [e0]
    for _ in range(D - 1):
        prev = Kcols[-1]
        Kcols.append([sum(L[k][i] * prev[k] for k in range(D)) for i in range(D)])
    K = flint.fmpq_mat(D, D, [flint.fmpq(Kcols[j][i].numerator, Kcols[j][i].denominator) for i in range(D) for j in range(D)])
    coords = []
    for m in mats:
        col = [m[A.index[(0,) * n]][i] for i in range(D)]
        b = flint.fmpq_mat(D, 1, [flint.fmpq(c.numerator, c.denominator) for c in col])
        sol = K.solve(b)
        coeffs = [Fraction(int(sol[i, 0].p), int(sol[i, 0].q)) for i in range(D)]
        coords.append(Poly(QQ, coeffs, "l"))
    return RUR(G.variables, tuple(weights), mu.change_var("l"), coords, D)
