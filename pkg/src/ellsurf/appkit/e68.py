"""The rank-68 surface y^2 = x^3 + T^360 + 1 and its eleven building blocks.

Ten blocks are rational surfaces y^2 = x^3 + t^a (t^b + 1).  Putting t = T^m
with m = 360/b and rescaling by T^(-am/3), T^(-am/2) maps each of them into
the big surface, which fixes the exponent patterns used by ``lift_to_e68``.
The eleventh block is the K3 surface y^2 = x^3 + t^5 + t^-5 whose sections
come from the rational surface y^2 = x^3 + u^5 - 5u^3 + 5u through
u = s + 1/s (or zeta s + 1/(zeta s)) with s = T^36.

``verify_e68`` gathers the consistency checks: Delsarte ranks, Shioda-Tate
ranks, lift identities over a finite field and Frobenius orders.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import lcm

from ..delsarte import DelsarteSurface, delsarte_rank
from ..exactalg import GF, QQ, FiniteField, Poly
from ..fibres import euler_data, fibre_inventory, fibre_symbols, shioda_tate_rank
from ..weierstrass import Section, WeierstrassModel

E68_DEGREE = 360
GROUP_ORDER = 829440
PARTIAL_ORDERS = (1728, 5760)


class ShapeMismatch(ValueError):
    def __init__(self, expected: str, why: str = ""):
        msg = f"section does not have the integral shape; expected pattern {expected}"
        super().__init__(msg + (f" ({why})" if why else ""))
        self.expected = expected


@dataclass(frozen=True)
class SubSurface:
    """One block of the decomposition.

    ``a``, ``b`` describe a6 = t^a (t^b + 1); the K3 block has b = None and
    is handled through its rational quotient (``base_a6``).
    """

    key: str
    index: int
    a: int
    b: int | None
    rank: int
    field_degree: int
    sections: int  # integral sections of the section model over the closure

    @property
    def is_k3(self) -> bool:
        return self.b is None

    @property
    def a6_text(self) -> str:
        if self.is_k3:
            return "t^5 + t^-5"
        inner = f"t^{self.b} + 1" if self.b > 1 else "t + 1"
        if self.a == 0:
            return inner
        pre = f"t^{self.a}" if self.a > 1 else "t"
        return f"{pre}*({inner})"

    def model(self) -> WeierstrassModel:
        """The block itself (the K3 block in its cleared chart t(t^10 + 1))."""
        t = Poly.gen(QQ)
        if self.is_k3:
            return WeierstrassModel.short(QQ, 0, t * (t**10 + 1), chi=2)
        return WeierstrassModel.short(QQ, 0, t**self.a * (t**self.b + 1), chi=1)

    def section_model(self) -> WeierstrassModel:
        """Rational surface whose integral sections are lifted."""
        if self.is_k3:
            t = Poly.gen(QQ)
            return WeierstrassModel.short(QQ, 0, t**5 - 5 * t**3 + 5 * t, chi=1)
        return self.model()

    @property
    def m(self) -> int:
        return 36 if self.is_k3 else E68_DEGREE // self.b

    def exponents(self):
        """(x exponents for t^2, t, 1; y exponents for t^3, t^2, t, 1)."""
        if self.is_k3:
            raise ValueError("the K3 block lifts through u = T^36 + T^-36")
        m, a = self.m, self.a
        sx, sy = a * m // 3, a * m // 2
        return (tuple(k * m - sx for k in (2, 1, 0)), tuple(k * m - sy for k in (3, 2, 1, 0)))

    def pattern(self) -> str:
        if self.is_k3:
            return "(T^60 (g u^2 + a u + b), T^90 (h u^3 + c u^2 + d u + e)), u = z T^36 + z^-1 T^-36, z^5 = 1"
        ex, ey = self.exponents()
        xs = " + ".join(f"{c} T^{e}" for c, e in zip("abc", ex))
        ys = " + ".join(f"{c} T^{e}" for c, e in zip("defg", ey))
        return f"({xs}, {ys})"


SUBSURFACES = (
    SubSurface("t2(t+1)", 1, 2, 1, 2, 2, 18),
    SubSurface("t3(t+1)", 2, 3, 1, 2, 2, 18),
    SubSurface("t(t2+1)", 3, 1, 2, 4, 16, 48),
    SubSurface("t2(t2+1)", 4, 2, 2, 4, 6, 60),
    SubSurface("t3(t2+1)", 5, 3, 2, 4, 16, 48),
    SubSurface("t(t3+1)", 6, 1, 3, 6, 54, 126),
    SubSurface("t2(t3+1)", 7, 2, 3, 6, 54, 126),
    SubSurface("t(t5+1)", 8, 1, 5, 8, 240, 240),
    SubSurface("t5+1", 9, 0, 5, 8, 240, 240),
    SubSurface("t(t4+1)", 10, 1, 4, 8, 48, 240),
    SubSurface("k3", 11, 0, None, 16, 192, 240),
)

# the two subsets whose partial splitting fields have orders 1728 and 5760
SUBSET_1728 = ("t2(t+1)", "t3(t+1)", "t(t2+1)", "t2(t2+1)", "t3(t2+1)", "t(t3+1)", "t2(t3+1)", "t(t4+1)")
SUBSET_5760 = ("t(t5+1)", "t5+1", "k3")


def subsurface(ident) -> SubSurface:
    """Look up a block by 1-based index, key, or a6 text such as 't^2*(t+1)'."""
    if isinstance(ident, SubSurface):
        return ident
    if isinstance(ident, int) or (isinstance(ident, str) and ident.isdigit()):
        i = int(ident)
        if 1 <= i <= len(SUBSURFACES):
            return SUBSURFACES[i - 1]
        raise KeyError(f"no sub-surface with index {i}")
    norm = str(ident).replace(" ", "").replace("*", "").replace("^", "").lower()
    for S in SUBSURFACES:
        if norm in (S.key, S.a6_text.replace(" ", "").replace("*", "").replace("^", "")):
            return S
    if norm in ("t5+t-5", "t(t10+1)"):
        return SUBSURFACES[-1]
    raise KeyError(f"unknown sub-surface {ident!r}")


def e68_model() -> WeierstrassModel:
    t = Poly.gen(QQ)
    return WeierstrassModel.short(QQ, 0, t**E68_DEGREE + 1, chi=60)


# ---------------------------------------------------------------------------
# sparse Laurent polynomials in T
# ---------------------------------------------------------------------------


def _lmul(A: dict, B: dict) -> dict:
    out = {}
    for i, a in A.items():
        for j, b in B.items():
            k = i + j
            v = out.get(k)
            out[k] = a * b if v is None else v + a * b
    return {k: v for k, v in out.items() if v != 0}


def _ladd(A: dict, B: dict) -> dict:
    out = dict(A)
    for k, v in B.items():
        w = out.get(k)
        out[k] = v if w is None else w + v
    return {k: v for k, v in out.items() if v != 0}


def _lscale(A: dict, c) -> dict:
    return {k: v * c for k, v in A.items() if v * c != 0}


def _lpoly(coeffs, step: int, shift: int) -> dict:
    """sum c_i T^(i*step + shift) for ascending coefficients c_i."""
    return {i * step + shift: c for i, c in enumerate(coeffs) if c != 0}


def _lcompose(coeffs, u: dict) -> dict:
    """Horner evaluation of the ascending coefficient list at the Laurent polynomial u."""
    acc = {}
    for c in reversed(coeffs):
        acc = _lmul(acc, u)
        if c != 0:
            acc = _ladd(acc, {0: c})
    return acc


@dataclass
class LiftedSection:
    """A section of the rank-68 surface with Laurent coordinates in T."""

    source: str
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    ring: object = None
    zero: bool = False

    def residual(self) -> dict:
        """y^2 - x^3 - T^360 - 1 as a sparse Laurent polynomial."""
        if self.zero:
            return {}
        one = self.ring(1)
        lhs = _lmul(self.y, self.y)
        rhs = _ladd(_lmul(_lmul(self.x, self.x), self.x), {E68_DEGREE: one, 0: one})
        return _ladd(lhs, _lscale(rhs, -one))

    def satisfies_e68(self) -> bool:
        return not self.residual()

    def exponents(self):
        return (tuple(sorted(self.x, reverse=True)), tuple(sorted(self.y, reverse=True)))

    def to_section(self) -> Section:
        """Same point as a Section with rational-function coordinates."""
        if self.zero:
            return Section.zero()
        from ..exactalg import RationalFunction

        def rf(D):
            lo = min(min(D, default=0), 0)
            num = Poly(self.ring, [D.get(k + lo, 0) for k in range(max(D, default=0) - lo + 1)], "t")
            return RationalFunction(num, Poly.monomial(self.ring, -lo, 1, "t"))

        return Section(rf(self.x), rf(self.y))


def _coefficients(P: Section, S: SubSurface):
    xp, yp = P.xp, P.yp
    if xp.degree > 2 or yp.degree > 3:
        raise ShapeMismatch(S.pattern(), f"deg x = {xp.degree}, deg y = {yp.degree}")
    ring = xp.ring
    xs = list(xp.coeffs) + [ring(0)] * (3 - len(xp.coeffs))
    ys = list(yp.coeffs) + [ring(0)] * (4 - len(yp.coeffs))
    return ring, xs, ys


def lift_to_e68(surface_id, section: Section, zeta=None, check: bool = True) -> LiftedSection:
    """Carry an integral section of a block to y^2 = x^3 + T^360 + 1.

    For the K3 block ``section`` lives on y^2 = x^3 + u^5 - 5u^3 + 5u and
    ``zeta`` (a fifth root of unity in its coefficient ring, default 1)
    selects u = zeta T^36 + zeta^-1 T^-36.
    """
    S = subsurface(surface_id)
    if section.is_zero():
        return LiftedSection(S.key, zero=True)
    if not section.is_integral():
        raise ShapeMismatch(S.pattern(), "coordinates are not polynomials")
    ring, xs, ys = _coefficients(section, S)
    if S.is_k3:
        one = ring(1)
        z = one if zeta is None else zeta
        if z**5 != one:
            raise ValueError("zeta must be a fifth root of unity")
        u = {36: z, -36: 1 / z}
        X = {k + 60: v for k, v in _lcompose(xs, u).items()}
        Y = {k + 90: v for k, v in _lcompose(ys, u).items()}
    else:
        if zeta is not None:
            raise ValueError("zeta only applies to the K3 block")
        m = S.m
        X = _lpoly(xs, m, -S.a * m // 3)
        Y = _lpoly(ys, m, -S.a * m // 2)
    L = LiftedSection(S.key, X, Y, ring)
    if check and not L.satisfies_e68():
        raise ArithmeticError("lifted section does not satisfy the rank-68 equation")
    return L


# ---------------------------------------------------------------------------
# verification report
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    expected: object
    got: object
    status: str  # "pass" | "fail" | "skip"

    def to_dict(self):
        return {"name": self.name, "expected": _jsonable(self.expected), "got": _jsonable(self.got), "status": self.status}


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


@dataclass
class Report:
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def add(self, name, expected, got, ok=None):
        if ok is None:
            ok = expected == got
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        self.checks.append(Check(name, expected, got, status))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self):
        return {"checks": [c.to_dict() for c in self.checks]}

    def __str__(self):
        w = max((len(c.name) for c in self.checks), default=0)
        return "\n".join(f"{c.status.upper():4}  {c.name:<{w}}  expected {c.expected}  got {c.got}" for c in self.checks)


@dataclass
class E68Config:
    primes: tuple = (7, 13)
    lift_samples: int = 4
    frobenius: bool = True
    lifts: bool = True
    blocks: tuple | None = None  # restrict the finite-field work to these keys
    workers: int = 1


def _symbols(fibres) -> str:
    out = []
    for sym, d in fibre_symbols(fibres):
        if sym != "I0":
            out.append(sym if d == 1 else f"{d}x{sym}")
    return " ".join(out)


def _multiplicative_order(a: int, n: int) -> int:
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _is_good(E: WeierstrassModel, p: int) -> bool:
    from ..sections import choose_good_prime

    try:
        return choose_good_prime(E, start=p, limit=p + 1) == p
    except RuntimeError:
        return False


def _fifth_root(K: FiniteField):
    if (K.q - 1) % 5:
        return None
    e = (K.q - 1) // 5
    for a in range(2, K.p):
        z = K(a) ** e
        if z != 1:
            return z
    g = K.gen()
    for k in range(1, 64):
        z = (g + k) ** e
        if z != 1:
            return z
    return None


def _sample(sections, n):
    secs = [P for P in sections if not P.is_zero()]
    if len(secs) <= n:
        return secs
    step = len(secs) / n
    return [secs[int(i * step)] for i in range(n)]


def block_search(S: SubSurface, p: int):
    """Integral sections of the block's section model over the closure of F_p."""
    from ..sections import search_via_ideal

    E = S.section_model()
    F = GF(p)
    return search_via_ideal(E.extend(F, F))


def frobenius_order(S: SubSurface, p: int, found=None) -> int:
    """Order of Frob_p on the block's Mordell-Weil lattice."""
    found = found if found is not None else block_search(S, p)
    m = 1
    for d in found.degrees.values():
        m = lcm(m, d)
    if S.is_k3:
        m = lcm(m, _multiplicative_order(p, 5))
    return m


def _lift_block(S: SubSurface, found, n):
    """Lift a sample of sections; for the K3 block use all five twists."""
    K = found.model.ring
    ok = total = 0
    zetas = [None]
    if S.is_k3:
        z = _fifth_root(K)
        if z is None:
            d = _multiplicative_order(K.q, 5)
            K2 = GF(K.p, K.k * d)
            emb = K.embedding_into(K2)
            secs = [P.map(K2, emb) for P in _sample(found, n)]
            K = K2
            z = _fifth_root(K)
        else:
            secs = _sample(found, n)
        zetas = [z**k for k in range(5)]
    else:
        secs = _sample(found, n)
    for P in secs:
        for z in zetas:
            L = lift_to_e68(S, P, zeta=z if S.is_k3 else None, check=False)
            total += 1
            ok += L.satisfies_e68()
    return ok, total


def verify_e68(config: E68Config | None = None, log=None) -> Report:
    """Consistency report for the rank-68 decomposition (see module docstring)."""
    cfg = config or E68Config()
    R = Report()
    say = log or (lambda msg: None)

    t0 = time.perf_counter()
    E = e68_model()
    fib = fibre_inventory(E)
    e, _, _ = euler_data(E, fib)
    R.add("e68: Euler number", 720, e)
    r68 = delsarte_rank(DelsarteSurface.from_model(E), E, fib)
    R.add("e68: Delsarte rank", 68, r68)
    R.timings["delsarte"] = time.perf_counter() - t0
    say(f"Delsarte rank {r68}")

    ranks = []
    for S in SUBSURFACES:
        M = S.model()
        fS = fibre_inventory(M)
        if S.is_k3:
            r = delsarte_rank(DelsarteSurface.from_model(M), M, fS)
            R.add(f"{S.key}: Delsarte rank", S.rank, r)
        else:
            eS, _, _ = euler_data(M, fS)
            R.add(f"{S.key}: Euler sum", 12, eS)
            r = shioda_tate_rank(M, fibres=fS)
            R.add(f"{S.key}: Shioda-Tate rank ({_symbols(fS)})", S.rank, r)
        ranks.append(r)
    R.add("rank sum of the eleven blocks", 68, sum(ranks))
    R.add("rank sum equals Delsarte rank", r68, sum(ranks))

    keys = set(cfg.blocks) if cfg.blocks else {S.key for S in SUBSURFACES}
    blocks = [S.key for S in SUBSURFACES if S.key in keys]
    if not (cfg.frobenius or cfg.lifts) or not cfg.primes:
        return R
    jobs = [(k, p, cfg.lift_samples if cfg.lifts else 0) for p in cfg.primes for k in blocks]
    if cfg.workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_block_job, jobs))
    else:
        results = [_block_job(j) for j in jobs]
    by_prime = {}
    for (k, p, _), res in zip(jobs, results):
        by_prime.setdefault(p, []).append((subsurface(k), res))
    for p in cfg.primes:
        orders = {}
        for S, res in by_prime[p]:
            if not res["good"]:
                R.add(f"{S.key}: good prime {p}", True, False, "skip")
                continue
            R.timings[f"search {S.key} p={p}"] = res["seconds"]
            R.add(f"{S.key}: integral sections over closure of F_{p}", S.sections, res["count"])
            if cfg.frobenius:
                orders[S.key] = res["order"]
            if cfg.lifts:
                R.add(f"{S.key}: lifts satisfy E68 over F_{p}", res["lift_total"], res["lift_ok"])
            say(f"p={p} {S.key}: order {res['order']}")
        if not cfg.frobenius or not orders:
            continue
        full = 1
        for v in orders.values():
            full = lcm(full, v)
        R.add(f"Frobenius order at p={p} divides {GROUP_ORDER}", f"divisor of {GROUP_ORDER}", full, GROUP_ORDER % full == 0)
        for target, subset in zip(PARTIAL_ORDERS, (SUBSET_1728, SUBSET_5760)):
            if not set(subset) <= set(orders):
                continue
            o = 1
            for k in subset:
                o = lcm(o, orders[k])
            R.add(f"Frobenius order at p={p} on the {target}-subset", f"divisor of {target}", o, target % o == 0)
        R.timings[f"orders p={p}"] = dict(orders)
    return R


def _block_job(job):
    """Search, Frobenius order and lift sample for one (block, prime); picklable."""
    key, p, samples = job
    S = subsurface(key)
    if p == 5 or not _is_good(S.section_model(), p):
        return {"good": False}
    t1 = time.perf_counter()
    found = block_search(S, p)
    ok = total = 0
    if samples:
        ok, total = _lift_block(S, found, samples)
    return {
        "good": True,
        "count": len(found),
        "order": frobenius_order(S, p, found),
        "lift_ok": ok,
        "lift_total": total,
        "seconds": time.perf_counter() - t1,
    }
