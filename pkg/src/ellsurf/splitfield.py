"""Splitting fields over Q and their automorphism groups.

The splitting field is built by iterated adjunction inside Q_p for a prime p
at which every input polynomial splits into distinct linear factors.  Each
adjunction forms the norm polynomial of theta + c*rho from p-adic root
values, factors it over Q and keeps the factor through the distinguished
embedding.  The factor's p-adic roots tell us how every embedding of the new
field acts on the tracked roots, which is exactly the permutation data needed
afterwards.

Automorphisms theta -> h(theta) and root expressions are then computed by
interpolation mod p, Newton lifting in (Z/p^m)[x]/(g) and reconstruction of
h*g' mod g from symmetric representatives.  Nothing is accepted before an
exact check over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

import flint

from .exactalg.factor import _zmod_ctx, factor_q
from .exactalg.fields import QQ, _Ring, is_prime, next_prime
from .exactalg.poly import Poly

DEFAULT_MAX_DEGREE = 240
_MAX_PRIME_RETRIES = 8
_MAX_WEIGHT_TRIES = 40
_MAX_PREC_EXP = 1 << 14


class NotSquarefree(ValueError):
    def __init__(self):
        super().__init__("product of the input polynomials is not squarefree")


class DegreeBoundExceeded(ValueError):
    def __init__(self, bound, tower):
        self.tower = list(tower)
        steps = "; ".join(f"{t['step']} -> {t['degree']}" for t in tower) or "empty tower"
        super().__init__(f"splitting degree exceeds bound {bound} (partial tower: {steps})")


class BadPrime(ValueError):
    def __init__(self, p, why):
        self.p = p
        super().__init__(f"prime {p} is unsuitable ({why}); try another prime")


class ReconstructionFailed(ArithmeticError):
    def __init__(self):
        super().__init__("reconstruction did not verify: increase precision or change prime")


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def _sym(v, m):
    v %= m
    return v - m if v > m // 2 else v


def _to_fmpq(f: Poly):
    return flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in f.coeffs])


def _from_fmpq(g, var="x") -> Poly:
    return Poly(QQ, [Fraction(int(c.p), int(c.q)) for c in g.coeffs()], var)


def _scaled_monic(f: Poly):
    """(a, coeffs) with a^n f(y/a) monic integral; roots of the result are a*roots of f."""
    f = f.monic()
    n = f.degree
    a = 1
    for c in f.coeffs:
        a = math.lcm(a, Fraction(c).denominator)
    cs = [int(Fraction(c) * a ** (n - i)) for i, c in enumerate(f.coeffs)]
    return a, cs


def _root_bound_log2(cs):
    """log2 of Fujiwara's bound on the absolute values of the roots of a monic poly."""
    n = len(cs) - 1
    best = 0.0
    for k in range(1, n + 1):
        c = abs(cs[n - k])
        if c:
            v = math.log2(c) / k
            if k == n:
                v -= 1.0 / n
            best = max(best, v)
    return best + 1.0


def _weights():
    for k in count(1):
        yield k
        yield -k


def _product_tree(vals, R):
    polys = [R([-v, 1]) for v in vals]
    if not polys:
        return R([1])
    while len(polys) > 1:
        nxt = [polys[i] * polys[i + 1] for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def _eval_int(cs, x, m):
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % m
    return acc


# ---------------------------------------------------------------------------
# tracked roots in Z_p
# ---------------------------------------------------------------------------


class RootStore:
    """p-adic values of the (scaled, integral) roots of the tracked factors."""

    def __init__(self, p, factors):
        self.p = p
        self.factors = factors  # list of integer coefficient lists (monic)
        self.orbit = []  # global root index -> factor index
        self.members = []  # factor index -> list of global root indices
        self._vals = []
        for fi, cs in enumerate(factors):
            rts = sorted(int(r) for r, _ in flint.nmod_poly(cs, p).roots())
            idx = []
            for r in rts:
                idx.append(len(self.orbit))
                self.orbit.append(fi)
                self._vals.append(r)
            self.members.append(idx)
        self.prec = 1

    def __len__(self):
        return len(self._vals)

    def values(self, prec):
        if prec > self.prec:
            self._lift(prec)
        m = self.p**prec
        return [v % m for v in self._vals]

    def _lift(self, prec):
        p = self.p
        cur = self.prec
        while cur < prec:
            nxt = min(2 * cur, prec)
            m = p**nxt
            for i, v in enumerate(self._vals):
                cs = self.factors[self.orbit[i]]
                fv = _eval_int(cs, v, m)
                dcs = [k * c for k, c in enumerate(cs)][1:]
                dv = _eval_int(dcs, v, m)
                self._vals[i] = (v - fv * pow(dv, -1, m)) % m
            cur = nxt
        self.prec = prec


# ---------------------------------------------------------------------------
# fields in the tower
# ---------------------------------------------------------------------------


@dataclass
class _Stage:
    weights: dict  # root index -> integer weight
    embeddings: list  # dicts root -> root, identity first
    g: object  # flint.fmpz_poly, monic
    logM: float  # log2 bound on |theta| under any complex embedding

    @property
    def degree(self):
        return len(self.embeddings)

    @property
    def known(self):
        return set(self.embeddings[0])


def _theta_values(store, weights, embeddings, prec):
    vals = store.values(prec)
    m = store.p**prec
    return [sum(w * vals[e[i]] for i, w in weights.items()) % m for e in embeddings]


def _extend(store, base_w, extra_w, candidates, logM, tower, step, max_norm_degree, bound):
    """Adjoin theta_extra to theta_base: minimal polynomial of the combination and its embeddings."""
    p = store.p
    d = len(candidates)
    if d > max_norm_degree:
        raise DegreeBoundExceeded(bound, tower + [{"step": step, "degree": f">= {d // 2} (norm degree {d})"}])
    tries = 0
    for c in _weights():
        tries += 1
        if tries > _MAX_WEIGHT_TRIES:
            raise BadPrime(p, "no separating weight found")
        w = dict(base_w)
        for i, x in extra_w.items():
            w[i] = w.get(i, 0) + c * x
        w = {i: x for i, x in w.items() if x}
        kd = None
        for k in (1, 2, 3):
            low = _theta_values(store, w, candidates, k)
            if len(set(low)) == d:
                kd = k
                break
        if kd is None:
            continue
        newM = math.log2(2.0**logM + abs(c) * 2.0 ** _extra_log(store, extra_w))
        bits = d * math.log2(1 + 2.0**newM) + 2
        slack = 2 * d * (kd - 1) + 1
        prec = max(1, math.ceil(bits / math.log2(p)) + 1) + slack
        m = p**prec
        vals = _theta_values(store, w, candidates, prec)
        N = _product_tree(vals, _zmod_ctx(m))
        Nz = flint.fmpz_poly([_sym(int(x), m) for x in N.coeffs()])
        _, facs = Nz.factor()
        # roots of a factor F are the values where F vanishes to high p-adic order
        thresh = d * (kd - 1)
        F = None
        for cand, _e in facs:
            cs = [int(x) for x in cand.coeffs()]
            if _pval(_eval_int(cs, vals[0], m), p, prec) > thresh:
                F = cand
                break
        if F is None:  # pragma: no cover
            raise BadPrime(p, "distinguished root lost")
        cs = [int(x) for x in F.coeffs()]
        chosen = [e for e, v in zip(candidates, vals) if _pval(_eval_int(cs, v, m), p, prec) > thresh]
        if len(chosen) != F.degree():
            raise BadPrime(p, "norm factor does not split as expected")
        if F.leading_coefficient() != 1:
            raise BadPrime(p, "non-monic norm factor")
        if len(set(_theta_values(store, w, chosen, 1))) != len(chosen):
            continue  # conjugates must stay distinct mod p for the lifting stage
        return _Stage(w, chosen, F, newM)
    raise AssertionError("unreachable")


def _pval(x, p, cap):
    if x == 0:
        return cap
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def _extra_log(store, weights):
    return math.log2(sum(abs(x) * 2.0 ** store.bounds[store.orbit[i]] for i, x in weights.items()) or 1.0)


def _split_one(store, fi, bound, tower, max_norm_degree):
    """Splitting field of one irreducible factor by adjoining its roots one at a time."""
    idx = store.members[fi]
    n = len(idx)
    first = idx[0]
    st = _Stage({first: 1}, [{first: s} for s in idx], flint.fmpz_poly(store.factors[fi]), store.bounds[fi])
    tower.append({"step": f"root {first} of factor {fi}", "degree": st.degree})
    for j in idx[1:]:
        if j in st.known:
            continue
        if st.degree > bound:
            raise DegreeBoundExceeded(bound, tower)
        cands = []
        for e in st.embeddings:
            used = set(e.values())
            free = [s for s in idx if s not in used]
            for s in free:
                ne = dict(e)
                ne[j] = s
                cands.append(ne)
        if all(len([s for s in idx if s not in set(e.values())]) == 1 for e in st.embeddings):
            # one root left: its image is forced, the field does not grow
            st = _Stage(st.weights, cands, st.g, st.logM)
        else:
            nxt = _extend(store, st.weights, {j: 1}, cands, st.logM, tower, f"root {j}", max_norm_degree, bound)
            if nxt.degree == st.degree:
                # rho_j already lies in the field: keep the primitive element
                nxt = _Stage(st.weights, nxt.embeddings, st.g, st.logM)
            st = nxt
        tower.append({"step": f"root {j} of factor {fi}", "degree": st.degree})
    if len(st.embeddings[0]) != n:  # pragma: no cover
        raise AssertionError("splitting field incomplete")
    if st.degree > bound:
        raise DegreeBoundExceeded(bound, tower)
    return st


def _compositum(store, A, B, bound, tower, max_norm_degree):
    cands = []
    for e in A.embeddings:
        for f in B.embeddings:
            ne = dict(e)
            ne.update(f)
            cands.append(ne)
    st = _extend(store, A.weights, B.weights, cands, A.logM, tower, "compositum", max_norm_degree, bound)
    tower.append({"step": "compositum", "degree": st.degree})
    if st.degree > bound:
        raise DegreeBoundExceeded(bound, tower)
    return st


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------


@dataclass
class NumberFieldRep:
    """Q[x]/(g) with g monic integral and irreducible."""

    g: Poly
    tower: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.g.degree

    def reduce(self, h: Poly) -> Poly:
        return h % self.g

    def field(self) -> "NumberField":
        return NumberField(self.g)


@dataclass(frozen=True)
class PrimitiveElementForm:
    """theta = sum c_i rho_i over the tracked (scaled) roots."""

    weights: tuple

    def value(self, roots):
        return sum(c * r for c, r in zip(self.weights, roots))


@dataclass
class AutMap:
    image: Poly  # h with theta -> h(theta)
    permutation: tuple  # action on tracked roots
    scaled: object = None  # h * g' mod g, integral (flint.fmpz_poly)
    lift_log: list = field(default_factory=list)  # (precision exponent, residue valuation)


@dataclass
class PermData:
    """Embeddings of the final field as permutations of the tracked roots."""

    store: RootStore
    form: PrimitiveElementForm
    perms: list  # one permutation per embedding, identity first

    @property
    def prime(self):
        return self.store.p

    def index(self):
        return {pi: k for k, pi in enumerate(self.perms)}


@dataclass
class SplitResult:
    field: NumberFieldRep
    group: list  # permutations, identity first, sorted
    table: list  # table[a][b] = index of group[a] o group[b]
    aut_of_field: list  # AutMap per group element
    roots: list  # per input polynomial: list of root expressions (Poly in x)
    prime: int
    perm_data: PermData = None
    name: str = ""


# ---------------------------------------------------------------------------
# prime choice and construction
# ---------------------------------------------------------------------------


def _prepare(fs):
    fs = [f.map(QQ) if f.ring != QQ else f for f in fs]
    if any(f.degree < 1 for f in fs):
        raise ValueError("input polynomials must be nonconstant")
    prod = fs[0]
    for f in fs[1:]:
        prod = prod * f
    if not prod.is_squarefree():
        raise NotSquarefree()
    facs = []
    owner = []
    for i, f in enumerate(fs):
        for g, _ in factor_q(f):
            facs.append(g)
            owner.append(i)
    return fs, prod, facs, owner


def _prime_ok(p, prod, scaled):
    pz = [int(c) for c in prod.primitive().coeffs]
    if pz[-1] % p == 0:
        return False
    P = flint.nmod_poly(pz, p)
    if P.gcd(P.derivative()).degree() != 0:
        return False
    for _, cs in scaled:
        fp = flint.nmod_poly(cs, p)
        if fp.gcd(fp.derivative()).degree() != 0:
            return False
        if len(fp.roots()) != len(cs) - 1:
            return False
    return True


def choose_prime(fs, start=5, limit=10**7):
    """Smallest p >= start at which every input splits into distinct linear factors."""
    fs, prod, facs, _ = _prepare(fs)
    scaled = [_scaled_monic(g) for g in facs]
    p = start if is_prime(start) else next_prime(start)
    while p < limit:
        if _prime_ok(p, prod, scaled):
            return p
        p = next_prime(p)
    raise BadPrime(p, "search limit reached")


def splitting_field(fs, p=None, max_degree=DEFAULT_MAX_DEGREE):
    """(NumberFieldRep, PermData, root expressions) for the product of fs.

    With p=None the smallest suitable prime is tried first and larger ones
    after a BadPrime (small p cannot separate the conjugates of a large field).
    """
    if p is not None:
        return _splitting_field_at(fs, p, max_degree)
    q = choose_prime(fs)
    for _ in range(_MAX_PRIME_RETRIES):
        try:
            return _splitting_field_at(fs, q, max_degree)
        except BadPrime:
            q = choose_prime(fs, start=q + 1)
    return _splitting_field_at(fs, q, max_degree)


def _splitting_field_at(fs, p, max_degree):
    fs, prod, facs, owner = _prepare(fs)
    scaled = [_scaled_monic(g) for g in facs]
    if not is_prime(p) or p < 5 or not _prime_ok(p, prod, scaled):
        raise BadPrime(p, "inputs do not split into distinct linear factors mod p")
    store = RootStore(p, [cs for _, cs in scaled])
    store.bounds = [_root_bound_log2(cs) for _, cs in scaled]
    tower = []
    max_norm = 4 * max_degree
    stages = []
    for fi, g in enumerate(facs):
        if g.degree == 1:
            continue
        stages.append(_split_one(store, fi, max_degree, tower, max_norm))
    linear = [store.members[fi][0] for fi, g in enumerate(facs) if g.degree == 1]
    if not stages:
        st = _Stage({}, [{}], flint.fmpz_poly([0, 1]), 0.0)
    else:
        stages.sort(key=lambda s: -s.degree)
        st = stages[0]
        for other in stages[1:]:
            if set(other.embeddings[0]) <= st.known:
                continue
            st = _compositum(store, st, other, max_degree, tower, max_norm)
    for i in linear:
        for e in st.embeddings:
            e[i] = i
    R = len(store)
    perms = sorted(tuple(e[i] for i in range(R)) for e in st.embeddings)
    form = PrimitiveElementForm(tuple(st.weights.get(i, 0) for i in range(R)))
    g = Poly(QQ, [int(c) for c in st.g.coeffs()], "x")
    K = NumberFieldRep(g, tower)
    data = PermData(store, form, perms)
    return K, data, (facs, owner, scaled)


# ---------------------------------------------------------------------------
# lifting: interpolation, Newton, reconstruction
# ---------------------------------------------------------------------------


class _Lifter:
    def __init__(self, K: NumberFieldRep, data: PermData):
        self.K = K
        self.data = data
        self.p = data.prime
        self.gz = [int(c) for c in K.g.coeffs]
        self.gq = flint.fmpq_poly(self.gz)
        self.D = K.degree
        p = self.p
        theta = [_eval_form(data, pi, 1) for pi in data.perms]
        self.theta = theta
        gp = flint.nmod_poly(self.gz, p)
        dg = gp.derivative()
        basis = []
        for t in theta:
            q, r = divmod(gp, flint.nmod_poly([-t, 1], p))
            inv = pow(int(dg(t)), -1, p)
            cs = [int(c) * inv % p for c in q.coeffs()]
            basis.append(cs + [0] * (self.D - len(cs)))
        self.basis = basis
        d, s, _t = flint.fmpq_poly(self.gz).derivative().xgcd(self.gq)
        self.dginv = s / d.coeffs()[0] if self.D > 1 else flint.fmpq_poly([1])

    def interpolate(self, values):
        """h mod p with h(theta_e) = values[e]."""
        p = self.p
        acc = [0] * self.D
        for v, b in zip(values, self.basis):
            if v % p:
                for k, c in enumerate(b):
                    acc[k] += v * c
        return [a % p for a in acc]

    def lift(self, fz, h0, check):
        """Newton-lift a root h0 (mod p) of fz in (Z/p^m)[x]/(g) until the exact check passes."""
        p = self.p
        log = []
        m = 1
        h = list(h0)
        prev = None
        while m < _MAX_PREC_EXP:
            m2 = 2 * m
            mod = p**m2
            R = _zmod_ctx(mod)
            g = R(self.gz)
            f = R(fz)
            hR = R(h)
            fh = f.compose_mod(hR, g)
            if log:
                # residue of the previous iterate, now visible at precision m2
                log[-1] = (m, _valuation(fh, p, m2))
            dfh = f.derivative().compose_mod(hR, g)
            hR = (hR - fh * _inverse_mod(dfh, g, p, m2, R)) % g
            log.append((m2, None))
            h = [int(c) for c in hR.coeffs()]
            m = m2
            if m < 4:
                continue
            H = (hR * g.derivative()) % g
            Hz = flint.fmpz_poly([_sym(int(c), mod) for c in H.coeffs()])
            if prev is not None and Hz == prev:
                hq = (flint.fmpq_poly(Hz) * self.dginv) % self.gq
                if check(hq):
                    return hq, Hz, log
            prev = Hz
        raise ReconstructionFailed()


def _inverse_mod(a, g, p, k, R):
    """Inverse of a modulo (g, p^k): invert mod p, then Newton-lift."""
    ap = flint.nmod_poly([int(c) % p for c in a.coeffs()], p)
    gp = flint.nmod_poly([int(c) % p for c in g.coeffs()], p)
    d, s, _ = ap.xgcd(gp)
    if d.degree() != 0:
        raise BadPrime(p, "derivative not invertible modulo the defining polynomial")
    inv = R([int(c) for c in (s * pow(int(d.coeffs()[0]), -1, p)).coeffs()])
    prec = 1
    while prec < k:
        inv = (inv * (2 - a * inv)) % g
        prec *= 2
    return inv


def _valuation(poly, p, cap):
    v = cap
    for c in poly.coeffs():
        c = int(c)
        if c:
            k = 0
            while c % p == 0:
                c //= p
                k += 1
            v = min(v, k)
    return v


def _eval_form(data, perm, prec):
    vals = data.store.values(prec)
    m = data.store.p**prec
    return sum(w * vals[perm[i]] for i, w in enumerate(data.form.weights) if w) % m


def _compose_mod(a, h, g):
    """a(h) mod g over Q by baby-step giant-step (Paterson-Stockmeyer)."""
    cs = list(a.coeffs()) if hasattr(a, "coeffs") else list(a)
    n = len(cs)
    if n == 0:
        return flint.fmpq_poly([0])
    m = max(1, math.isqrt(n))
    pows = [flint.fmpq_poly([1])]
    for _ in range(m):
        pows.append((pows[-1] * h) % g)
    giant = pows[m]
    acc = flint.fmpq_poly([0])
    for j in range((n - 1) // m, -1, -1):
        block = flint.fmpq_poly([0])
        for i, c in enumerate(cs[j * m : j * m + m]):
            if c != 0:
                block += pows[i] * c
        acc = (acc * giant + block) % g
    return acc


def _is_zero_mod(fz, hq, gq):
    """fz(h) == 0 in Q[x]/(g), exactly."""
    return _compose_mod(fz, hq, gq) == 0


def automorphisms(K: NumberFieldRep, data: PermData, p=None):
    """One AutMap per embedding, matched to its permutation of the tracked roots."""
    if p is not None and p != data.prime:
        raise BadPrime(p, "permutation data was computed at a different prime")
    L = _Lifter(K, data)
    index = data.index()
    gz = L.gz
    out = []
    for sigma in data.perms:
        if K.degree == 1:
            out.append(AutMap(Poly(QQ, [0, 1], "x"), sigma, flint.fmpz_poly([0, 1]), []))
            continue
        vals = []
        for tau in data.perms:
            comp = tuple(tau[sigma[i]] for i in range(len(sigma)))
            vals.append(L.theta[index[comp]])
        h0 = L.interpolate(vals)
        hq, Hz, log = L.lift(gz, h0, lambda hq: _is_zero_mod(gz, hq, L.gq))
        out.append(AutMap(_from_fmpq(hq), sigma, Hz, log))
    return out


def roots_in_field(f: Poly, K: NumberFieldRep, data: PermData, p=None, lifter=None):
    """All roots of f (which splits in K) as residue polynomials in x."""
    if p is not None and p != data.prime:
        raise BadPrime(p, "permutation data was computed at a different prime")
    f = f.map(QQ) if f.ring != QQ else f
    a, cs = _scaled_monic(f)
    store = data.store
    fi = None
    for k, fc in enumerate(store.factors):
        if fc == cs:
            fi = k
    out = []
    if fi is None:
        # not a tracked factor: split it into tracked ones
        for g, _ in factor_q(f):
            out.extend(roots_in_field(g, K, data, lifter=lifter))
        return out
    if f.degree == 1:
        return [Poly(QQ, [-f.monic().coeffs[0]], "x")]
    L = lifter or _Lifter(K, data)
    for k in store.members[fi]:
        if K.degree == 1:
            r = store.values(1)[k]
            val = Fraction(_sym(r, store.p), a)
            out.append(Poly(QQ, [val], "x"))
            continue
        vals = [store.values(1)[pi[k]] for pi in data.perms]
        h0 = L.interpolate(vals)
        hq, _, _ = L.lift(cs, h0, lambda hq: _is_zero_mod(cs, hq, L.gq))
        out.append(_from_fmpq(hq) * Fraction(1, a))
    if K.degree == 1:
        for r in out:
            if f(r.coeffs[0] if r.coeffs else Fraction(0)) != 0:
                raise ReconstructionFailed()
    return out


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


def compose(a, b):
    """a o b as permutations (apply b first)."""
    return tuple(a[i] for i in b)


def composition_table(perms):
    idx = {pi: k for k, pi in enumerate(perms)}
    table = []
    for a in perms:
        row = []
        for b in perms:
            c = compose(a, b)
            if c not in idx:
                raise ValueError("permutations do not form a group")
            row.append(idx[c])
        table.append(row)
    return table


def _perm_order(pi):
    e = tuple(range(len(pi)))
    k, cur = 1, pi
    while cur != e:
        cur = compose(pi, cur)
        k += 1
    return k


def _inverse(pi):
    inv = [0] * len(pi)
    for i, j in enumerate(pi):
        inv[j] = i
    return tuple(inv)


def group_signature(perms):
    """(order, element-order histogram, #classes, |Z|, |G'|) of a permutation group."""
    elems = set(perms)
    n = len(elems)
    orders = {}
    for g in elems:
        k = _perm_order(g)
        orders[k] = orders.get(k, 0) + 1
    seen = set()
    classes = 0
    for g in elems:
        if g in seen:
            continue
        classes += 1
        for h in elems:
            seen.add(compose(compose(h, g), _inverse(h)))
    center = sum(1 for g in elems if all(compose(g, h) == compose(h, g) for h in elems))
    comms = {compose(compose(a, b), compose(_inverse(a), _inverse(b))) for a in elems for b in elems}
    derived = _closure(comms, len(perms[0]))
    return (n, tuple(sorted(orders.items())), classes, center, len(derived))


def _closure(gens, deg):
    e = tuple(range(deg))
    group = {e}
    frontier = [e]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = compose(g, a)
                if c not in group:
                    group.add(c)
                    nxt.append(c)
        frontier = nxt
    return group


def _cycle(deg, *cycles):
    pi = list(range(deg))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            pi[a] = b
    return tuple(pi)


def _affine(n, units):
    # x -> u x + v on Z/n
    elems = [tuple((u * x + v) % n for x in range(n)) for u in units for v in range(n)]
    return elems


def _direct(*groups):
    out = [()]
    for G in groups:
        deg = len(G[0])
        out = [a + tuple(len(a) + x for x in b) for a in out for b in G]
        _ = deg
    return out


def _catalogue():
    S3 = sorted(_closure([_cycle(3, (0, 1, 2)), _cycle(3, (0, 1))], 3))
    C2 = [(0, 1), (1, 0)]
    D5 = sorted(_closure([_cycle(5, (0, 1, 2, 3, 4)), _cycle(5, (1, 4), (2, 3))], 5))
    D12 = sorted(_closure([_cycle(12, tuple(range(12))), tuple((-i) % 12 for i in range(12))], 12))
    S4 = sorted(_closure([_cycle(4, (0, 1, 2, 3)), _cycle(4, (0, 1))], 4))
    A4 = sorted(_closure([_cycle(4, (0, 1, 2)), _cycle(4, (1, 2, 3))], 4))
    S5 = sorted(_closure([_cycle(5, (0, 1, 2, 3, 4)), _cycle(5, (0, 1))], 5))
    A5 = sorted(_closure([_cycle(5, (0, 1, 2)), _cycle(5, (0, 1, 2, 3, 4))], 5))
    cat = {
        "S4": S4,
        "A4": A4,
        "S5": S5,
        "A5": A5,
        "F20": _affine(5, [1, 2, 3, 4]),
        "C2": C2,
        "S3": S3,
        "D5": D5,
        "C2xS3": _direct(C2, S3),
        "C2xS3xD5": _direct(C2, S3, D5),
        "QD16": [tuple((u * x + v) % 8 for x in range(8)) for u in (1, 3) for v in range(8)],
        "C9:C6": _affine(9, [1, 2, 4, 5, 7, 8]),
        "C2xD12": _direct(C2, D12),
        "C2xS4": _direct(C2, S4),
        "C4": [tuple((x + v) % 4 for x in range(4)) for v in range(4)],
        "C2xC2": _direct(C2, C2),
        "D4": sorted(_closure([_cycle(4, (0, 1, 2, 3)), _cycle(4, (1, 3))], 4)),
        "C6": [tuple((x + v) % 6 for x in range(6)) for v in range(6)],
    }
    return cat


_CATALOGUE = None


def group_name(perms):
    """Name from a small catalogue (cyclic groups always), else 'order-n group'."""
    global _CATALOGUE
    n = len(perms)
    if n == 1:
        return "trivial"
    if any(_perm_order(g) == n for g in perms):
        return f"C{n}"
    if _CATALOGUE is None:
        _CATALOGUE = {}
        for name, G in _catalogue().items():
            _CATALOGUE.setdefault(len(G), []).append((name, group_signature(G)))
    cands = _CATALOGUE.get(n, [])
    if not cands:
        return f"order-{n} group"
    sig = group_signature(perms)
    for name, s in cands:
        if s == sig:
            return name
    return f"order-{n} group"


# ---------------------------------------------------------------------------
# the main entry point
# ---------------------------------------------------------------------------


def split_aut_grp(fs, p=None, max_degree=DEFAULT_MAX_DEGREE, name_group=True) -> SplitResult:
    """Splitting field, Galois group, automorphisms and root expressions of fs."""
    K, data, (facs, owner, _scaled) = splitting_field(fs, p, max_degree)
    group = list(data.perms)
    table = composition_table(group)
    auts = automorphisms(K, data)
    L = _Lifter(K, data) if K.degree > 1 else None
    per_factor = [roots_in_field(g, K, data, lifter=L) for g in facs]
    roots = [[] for _ in fs]
    for g_roots, i in zip(per_factor, owner):
        roots[i].extend(g_roots)
    name = group_name(group) if name_group else ""
    return SplitResult(K, group, table, auts, roots, data.prime, data, name)


def apply_aut(h: Poly, a: Poly, g: Poly) -> Poly:
    """sigma(a) for a in Q[x]/(g), sigma given by theta -> h."""
    return _from_fmpq(_compose_mod(_to_fmpq(a), _to_fmpq(h), _to_fmpq(g)))


# ---------------------------------------------------------------------------
# arithmetic in a number field and factoring over it
# ---------------------------------------------------------------------------


class NFElem:
    __slots__ = ("K", "v")

    def __init__(self, K, v):
        self.K = K
        self.v = v

    def _c(self, o):
        if isinstance(o, NFElem):
            return o.v
        return flint.fmpq_poly([flint.fmpq(Fraction(o).numerator, Fraction(o).denominator)])

    def __add__(self, o):
        if isinstance(o, Poly):
            return NotImplemented
        return NFElem(self.K, self.v + self._c(o))

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Poly):
            return NotImplemented
        return NFElem(self.K, self.v - self._c(o))

    def __rsub__(self, o):
        return NFElem(self.K, self._c(o) - self.v)

    def __neg__(self):
        return NFElem(self.K, -self.v)

    def __mul__(self, o):
        if isinstance(o, Poly):
            return NotImplemented
        return NFElem(self.K, (self.v * self._c(o)) % self.K.gq)

    __rmul__ = __mul__

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in number field")
        d, s, _ = self.v.xgcd(self.K.gq)
        return NFElem(self.K, (s / d.coeffs()[0]) % self.K.gq)

    def __truediv__(self, o):
        if not isinstance(o, NFElem):
            o = self.K(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.K(o) * self.inverse()

    def __pow__(self, n):
        r = self.K(1)
        b = self
        if n < 0:
            b, n = b.inverse(), -n
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, o):
        try:
            return self.v == self._c(o)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.K.key(self))

    def poly(self, var="x") -> Poly:
        return _from_fmpq(self.v, var)

    def __repr__(self):
        return f"[{self.v}]"


class NumberField(_Ring):
    """Q[x]/(g) as a coefficient ring for Poly."""

    def __init__(self, g: Poly):
        self.g = g.map(QQ) if g.ring != QQ else g
        self.gq = _to_fmpq(self.g)

    @property
    def degree(self):
        return self.g.degree

    def __call__(self, a):
        if isinstance(a, NFElem):
            return a
        if isinstance(a, Poly):
            return NFElem(self, _to_fmpq(a.map(QQ)) % self.gq)
        return NFElem(self, flint.fmpq_poly([flint.fmpq(Fraction(a).numerator, Fraction(a).denominator)]))

    def gen(self):
        return self(Poly(QQ, [0, 1], "x"))

    def key(self, a):
        return tuple((int(c.p), int(c.q)) for c in a.v.coeffs())

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.g == other.g

    def __hash__(self):
        return hash(("NF", self.g))

    def __repr__(self):
        return f"Q[x]/({self.g})"


def _norm(f: Poly, K: NumberField, s: int):
    """Res_x(g(x), f(y - s x)) as a Poly over Q in the variable of f."""
    ctx = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")
    X, Y = ctx.gens()
    G = ctx.from_dict({(k, 0): flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for k, c in enumerate(K.g.coeffs) if c})
    F = ctx.from_dict({})
    sub = Y - s * X
    pw = ctx.from_dict({(0, 0): 1})
    for c in f.coeffs:
        cx = ctx.from_dict({(k, 0): q for k, q in enumerate(c.v.coeffs()) if q != 0})
        F = F + cx * pw
        pw = pw * sub
    Rz = G.resultant(F, "x")
    deg = max((m[1] for m in Rz.monoms()), default=0)
    cs = [Fraction(0)] * (deg + 1)
    for m, c in zip(Rz.monoms(), Rz.coeffs()):
        cs[m[1]] += Fraction(int(c.p), int(c.q))
    return Poly(QQ, cs, f.var)


def factor_over_numberfield(f: Poly):
    """Irreducible monic factors over K of a polynomial f over NumberField K (Trager)."""
    K = f.ring
    if not isinstance(K, NumberField):
        raise TypeError("polynomial must have NumberField coefficients")
    if f.degree < 1:
        return []
    f = f.monic()
    sq = f // f.gcd(f.derivative())
    if sq.degree < f.degree:
        # repeated factors: factor the squarefree part and restore multiplicities
        out = []
        for h in factor_over_numberfield(sq):
            g = f
            while True:
                q, r = divmod(g, h)
                if not r.is_zero():
                    break
                out.append(h)
                g = q
        return out
    alpha = K.gen()
    y = Poly.gen(K, f.var)
    for s in [0, 1, -1, 2, -2, 3, -3, 4, -4, 5]:
        N = _norm(f, K, s)
        if not N.is_squarefree():
            continue
        shifted = f(y - alpha * s)
        out = []
        for Ni, _ in factor_q(N):
            h = shifted.gcd(Ni.map(K))
            out.append(h(y + alpha * s).monic())
        out.sort(key=lambda h: h.degree)
        return out
    raise ArithmeticError("no squarefree norm found")


# ---------------------------------------------------------------------------
# Chebotarev statistics
# ---------------------------------------------------------------------------


@dataclass
class ChebotarevEstimate:
    order_lower_bound: int  # lcm of the local splitting degrees
    split_density: float
    order_estimate: float  # 1 / split_density
    samples: list  # (p, k_p)

    def to_dict(self):
        return {
            "order_lower_bound": self.order_lower_bound,
            "split_density": self.split_density,
            "order_estimate": self.order_estimate,
            "samples": [list(s) for s in self.samples],
        }


def _primes_from(spec):
    if isinstance(spec, range) or (isinstance(spec, tuple) and len(spec) == 2):
        lo, hi = (spec.start, spec.stop) if isinstance(spec, range) else spec
        return [q for q in range(max(lo, 2), hi) if is_prime(q)]
    return [int(q) for q in spec]


def chebotarev_estimate(fs, primes) -> ChebotarevEstimate:
    """Local splitting degrees k_p of prod(fs) at the given primes (or (lo, hi) range)."""
    ps = _primes_from(primes)
    if not ps:
        raise ValueError("empty prime range")
    fs = [f.map(QQ) if f.ring != QQ else f for f in fs]
    prod = fs[0]
    for f in fs[1:]:
        prod = prod * f
    if not prod.is_squarefree():
        raise NotSquarefree()
    pz = [int(c) for c in prod.primitive().coeffs]
    samples = []
    for q in ps:
        if pz[-1] % q == 0:
            continue
        P = flint.nmod_poly(pz, q)
        if P.gcd(P.derivative()).degree() != 0:
            continue
        _, facs = P.factor()
        k = 1
        for h, _ in facs:
            k = math.lcm(k, h.degree())
        samples.append((q, k))
    if not samples:
        raise ValueError("no prime of good reduction in range")
    lb = 1
    for _, k in samples:
        lb = math.lcm(lb, k)
    dens = sum(1 for _, k in samples if k == 1) / len(samples)
    est = 1 / dens if dens else math.inf
    return ChebotarevEstimate(lb, dens, est, samples)
