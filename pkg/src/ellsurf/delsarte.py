"""Lefschetz numbers of Delsarte elliptic surfaces and the resulting rank.

A Delsarte surface is a sum of four monomials in (t, X, Y, Z).  The exponent
matrix A has one row per monomial.  L is the subgroup of (Q/Z)^4 generated by
(e_i - e_4) A^{-1} for i = 1, 2, 3; lambda counts elements of L with all
coordinates nonzero for which some unit multiple has fractional parts not
summing to 2.  The rank is then b2 - lambda - 2 - sum(m_v - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .exactalg.matrix import det, hnf, inverse


class DegenerateDelsarte(ValueError):
    def __init__(self, msg="degenerate Delsarte data"):
        super().__init__(msg)


@dataclass(frozen=True)
class DelsarteSurface:
    matrix: tuple  # 4 rows of 4 nonnegative ints

    def __post_init__(self):
        if len(self.matrix) != 4 or any(len(r) != 4 for r in self.matrix):
            raise DegenerateDelsarte("need exactly four monomials in four variables")
        if any(x < 0 for r in self.matrix for x in r):
            raise DegenerateDelsarte("negative exponent")
        if det([list(r) for r in self.matrix]) == 0:
            raise DegenerateDelsarte()

    @classmethod
    def from_rows(cls, rows):
        """Accept projective rows (equal sums) or affine (t, x, y[, z]) rows.

        Rows with unequal sums are read through their first three entries as
        affine exponents of (t, x, y) and homogenized with the largest total
        degree.
        """
        rows = [tuple(int(x) for x in r) for r in rows]
        if len(rows) != 4:
            raise DegenerateDelsarte("need exactly four monomials")
        if all(len(r) == 4 for r in rows) and len({sum(r) for r in rows}) == 1:
            return cls(tuple(rows))
        aff = [r[:3] for r in rows]
        d = max(sum(r) for r in aff)
        return cls(tuple(tuple(r) + (d - sum(r),) for r in aff))

    @classmethod
    def from_model(cls, E):
        """Homogenize a Weierstrass model having exactly four monomials."""
        mons = set()
        a1, a2, a3, a4, a6 = E.a
        mons.add((0, 0, 2))
        mons.add((0, 3, 0))
        for poly, (ex, ey) in ((a1, (1, 1)), (a3, (0, 1)), (a2, (2, 0)), (a4, (1, 0)), (a6, (0, 0))):
            for i, c in enumerate(poly.coeffs):
                if c != 0:
                    m = (i, ex, ey)
                    if m in mons:
                        raise DegenerateDelsarte("monomials cancel or repeat")
                    mons.add(m)
        if len(mons) != 4:
            raise DegenerateDelsarte(f"model has {len(mons)} monomials, need 4")
        order = sorted(mons, key=lambda m: (-m[2], -m[1], -m[0]))
        return cls.from_rows(order)


@dataclass
class SubgroupL:
    N: int
    basis: list  # HNF rows (integer vectors, entries mod N scale)
    generators: list  # N * g_i as integer vectors
    elements: list  # integer vectors in [0, N)^4

    def __len__(self):
        return len(self.elements)

    def as_fractions(self, v):
        return tuple(Fraction(x, self.N) for x in v)


def _generators(S: DelsarteSurface):
    A = [[Fraction(x) for x in r] for r in S.matrix]
    Ainv = inverse(A)
    gens = []
    for i in range(3):
        e = [Fraction(0)] * 4
        e[i] = Fraction(1)
        e[3] = Fraction(-1)
        gens.append([sum(e[k] * Ainv[k][j] for k in range(4)) for j in range(4)])
    return gens


def group_L(S: DelsarteSurface) -> SubgroupL:
    gens = _generators(S)
    N = 1
    for g in gens:
        for x in g:
            N = lcm(N, x.denominator)
    ints = [[int(x * N) % N for x in g] for g in gens]
    stacked = [list(r) for r in ints] + [[N if i == j else 0 for j in range(4)] for i in range(4)]
    H, _ = hnf(stacked)
    H = [r for r in H if any(r)]
    if len(H) != 4:
        raise DegenerateDelsarte("lattice of unexpected rank")
    diag = [H[i][i] for i in range(4)]
    ranges = [N // d for d in diag]
    elements = []
    # mixed-radix traversal of the triangular basis
    def rec(i, acc):
        if i == 4:
            elements.append(tuple(x % N for x in acc))
            return
        row = H[i]
        cur = list(acc)
        for _ in range(ranges[i]):
            rec(i + 1, cur)
            cur = [a + b for a, b in zip(cur, row)]

    rec(0, [0, 0, 0, 0])
    elements = sorted(set(elements))
    return SubgroupL(N, H, ints, elements)


def _units(N):
    return [t for t in range(1, N + 1) if gcd(t, N) == 1] if N > 1 else [1]


def lambda_count(L: SubgroupL, quantifier: str = "exists") -> int:
    """#Lambda.  ``quantifier`` selects the exists / forall reading of the unit clause."""
    N = L.N
    units = _units(N)
    members = set(L.elements)
    seen = set()
    count = 0
    for a in L.elements:
        if a in seen or any(x == 0 for x in a):
            continue
        orbit = {tuple(t * x % N for x in a) for t in units}
        seen |= orbit
        sums = {sum(b) for b in orbit}
        if quantifier == "exists":
            ok = any(s != 2 * N for s in sums)
        elif quantifier == "forall":
            ok = all(s != 2 * N for s in sums)
        else:
            raise ValueError("quantifier must be 'exists' or 'forall'")
        if ok:
            count += len(orbit & members)
    return count


def element_in_lambda(a, quantifier="exists") -> bool:
    """Membership test for a single vector of Fractions (used in tests)."""
    fr = [Fraction(x) % 1 for x in a]
    if any(x == 0 for x in fr):
        return False
    M = 1
    for x in fr:
        M = lcm(M, x.denominator)
    sums = {sum((t * x) % 1 for x in fr) for t in _units(M)}
    if quantifier == "exists":
        return any(s != 2 for s in sums)
    return all(s != 2 for s in sums)


def delsarte_rank(S: DelsarteSurface, E, fibres=None, reading: str = "h2", quantifier="exists"):
    """Rank from the Lefschetz number.

    reading "h2": rank = b2 - lambda - 2 - sum(m_v - 1)  (the calibrated one)
    reading "lambda": rank = lambda - 2 - sum(m_v - 1)
    """
    from .fibres import euler_data, fibre_inventory, fibre_sum

    fibres = fibres if fibres is not None else fibre_inventory(E)
    e, b2, _ = euler_data(E, fibres)
    lam = lambda_count(group_L(S), quantifier)
    corr = fibre_sum(fibres)
    if reading == "h2":
        r = b2 - lam - 2 - corr
    elif reading == "lambda":
        r = lam - 2 - corr
    else:
        raise ValueError("reading must be 'h2' or 'lambda'")
    if r < 0:
        raise ValueError("interpretation mismatch")
    return r


def picard_number(S: DelsarteSurface, E, fibres=None) -> int:
    """rho = b2 - lambda."""
    from .fibres import euler_data, fibre_inventory

    fibres = fibres if fibres is not None else fibre_inventory(E)
    _, b2, _ = euler_data(E, fibres)
    return b2 - lambda_count(group_L(S))
