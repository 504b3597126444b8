"""Integer and rational matrices: Hermite and Smith forms, LLL on Gram matrices.

Matrices are lists of row lists.  Integer entries are Python ints, rational
entries Fractions.  Everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, lcm


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def transpose(M):
    return [list(r) for r in zip(*M)] if M else []


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def det(M):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = v / prev if isinstance(v, Fraction) else _exact_div(v, prev)
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            return Fraction(a, b)
        return q
    return a / b


def rref(M):
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in M]
    rows = len(A)
    cols = len(A[0]) if A else 0
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return A, piv


def rank(M):
    return len(rref(M)[1]) if M else 0


def inverse(M):
    n = len(M)
    aug = [list(M[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(M, b):
    """x with M x = b over Q (M square nonsingular)."""
    inv = inverse(M)
    return matvec(inv, b)


def nullspace(M):
    """Basis (list of vectors) of {x : M x = 0} over Q."""
    if not M:
        return []
    cols = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(M):
    """Row Hermite normal form with transform: (H, U) with U*M = H.

    H is upper echelon, pivots positive, entries above a pivot reduced into
    [0, pivot).  Zero rows are at the bottom.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if A else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine rows r..m-1 in column c
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _xgcd(a, b)
            if g < 0:
                g, x, y = -g, -x, -y
            if a == 0:
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
                if A[r][c] < 0:
                    A[r] = [-v for v in A[r]]
                    U[r] = [-v for v in U[r]]
                continue
            ag, bg = a // g, b // g
            rr = [x * u + y * v for u, v in zip(A[r], A[i])]
            ri = [-bg * u + ag * v for u, v in zip(A[r], A[i])]
            ur = [x * u + y * v for u, v in zip(U[r], U[i])]
            ui = [-bg * u + ag * v for u, v in zip(U[r], U[i])]
            A[r], A[i], U[r], U[i] = rr, ri, ur, ui
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [u - q * v for u, v in zip(A[i], A[r])]
                U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        r += 1
    return A, U


def integer_kernel(M):
    """Z-basis (rows) of {x in Z^m : x M = 0} for an m x n integer matrix."""
    H, U = hnf(M)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def lattice_intersection(B1, B2):
    """Z-basis of the intersection of two lattices given by row bases in Z^n."""
    k1 = len(B1)
    stacked = [list(r) for r in B1] + [list(r) for r in B2]
    ker = integer_kernel(stacked)
    out = []
    for v in ker:
        w = [sum(v[i] * B1[i][j] for i in range(k1)) for j in range(len(B1[0]))]
        out.append(w)
    H, _ = hnf(out) if out else ([], None)
    return [r for r in H if any(r)]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def snf(M):
    """Smith form: returns (U, D, V) with U*M*V = D, d1 | d2 | ..., U and V unimodular."""
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if A else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_comb(i, j, x, y, z, w):
        # (row_i, row_j) <- (x*ri + y*rj, z*ri + w*rj)
        ri, rj = A[i], A[j]
        A[i] = [x * a + y * b for a, b in zip(ri, rj)]
        A[j] = [z * a + w * b for a, b in zip(ri, rj)]
        ui, uj = U[i], U[j]
        U[i] = [x * a + y * b for a, b in zip(ui, uj)]
        U[j] = [z * a + w * b for a, b in zip(ui, uj)]

    def col_comb(i, j, x, y, z, w):
        for row in A:
            a, b = row[i], row[j]
            row[i], row[j] = x * a + y * b, z * a + w * b
        for row in V:
            a, b = row[i], row[j]
            row[i], row[j] = x * a + y * b, z * a + w * b

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        row_comb(t, i, 1, 0, -(b // a), 1)
                        continue
                    g, x, y = _xgcd(a, b)
                    row_comb(t, i, x, y, -b // g, a // g)
                    done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        col_comb(t, j, 1, 0, -(b // a), 1)
                        continue
                    g, x, y = _xgcd(a, b)
                    col_comb(t, j, x, y, -b // g, a // g)
                    done = False
            if done:
                piv = A[t][t]
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % piv:
                            row_comb(t, i, 1, 1, 0, 1)
                            done = False
                            break
                    if not done:
                        break
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    return U, A, V


def snf_diagonal(M):
    _, D, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------------------
# LLL on a Gram matrix
# ---------------------------------------------------------------------------


def _lll_definite(G, delta=Fraction(3, 4)):
    """LLL for a positive definite rational Gram matrix (Cohen, Alg. 2.6.3).

    Returns (T, G') with T unimodular (rows = new basis in old coordinates)
    and G' = T G T^t.
    """
    n = len(G)
    Gorig = [[Fraction(x) for x in r] for r in G]
    G = [list(r) for r in Gorig]
    T = identity(n)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n

    def gs_row(i):
        for j in range(i):
            mu[i][j] = (G[i][j] - sum(mu[j][m] * mu[i][m] * B[m] for m in range(j))) / B[j]
        B[i] = G[i][i] - sum(mu[i][m] ** 2 * B[m] for m in range(i))

    def red(k, l):
        q = floor(mu[k][l] + Fraction(1, 2))
        if not q:
            return
        T[k] = [a - q * b for a, b in zip(T[k], T[l])]
        # update Gram: b_k <- b_k - q b_l
        for j in range(n):
            if j != k:
                G[k][j] -= q * G[l][j]
                G[j][k] = G[k][j]
        G[k][k] = G[k][k] - 2 * q * (G[k][l] + q * G[l][l]) + q * q * G[l][l]
        G[k][k] = _quad(Gorig, T[k])
        mu[k][l] -= q
        for j in range(l):
            mu[k][j] -= q * mu[l][j]

    gs_row(0)
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            gs_row(k)
        red(k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            T[k], T[k - 1] = T[k - 1], T[k]
            G[:] = _transform_gram(Gorig, T)
            for i in range(max(k - 1, 0), kmax + 1):
                gs_row(i)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return T, _transform_gram(Gorig, T)


def _quad(G, v):
    return sum(v[i] * G[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))


def _transform_gram(G, T):
    return matmul(matmul(T, G), transpose(T))


def gram_schmidt_norms(G):
    """Squared Gram-Schmidt lengths B_i of a positive semidefinite Gram matrix."""
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            if B[j] == 0:
                continue
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
            mu[i][j] = s / B[j]
        B[i] = Fraction(G[i][i]) - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    return B


def is_lll_reduced(G, delta=Fraction(3, 4)) -> bool:
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
            mu[i][j] = s / B[j]
        B[i] = Fraction(G[i][i]) - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            return False
    return True


def lll(G, delta=Fraction(3, 4)):
    """LLL reduction of a symmetric positive semidefinite Gram matrix.

    Returns (T, G', k): T unimodular with rows giving the new basis in the old
    coordinates, G' = T G T^t, and k the kernel dimension.  The first k rows
    of T span the kernel (zero vectors); the remaining rows are LLL reduced.
    """
    n = len(G)
    G = [[Fraction(x) for x in r] for r in G]
    for i in range(n):
        for j in range(i):
            if G[i][j] != G[j][i]:
                raise ValueError("Gram matrix is not symmetric")
    if n == 0:
        return [], [], 0
    den = 1
    for r in G:
        for x in r:
            den = lcm(den, x.denominator)
    Gi = [[int(x * den) for x in r] for r in G]
    # unimodular V with V*Gi = H; zero rows of H span the kernel
    H, V = hnf(Gi)
    kernel = [V[i] for i in range(n) if not any(H[i])]
    k = len(kernel)
    # complete kernel rows to a unimodular basis: rows of V are a basis of Z^n
    rest = [V[i] for i in range(n) if any(H[i])]
    Gr = _transform_gram(G, rest)
    if rest:
        W, _ = _lll_definite(Gr, delta)
        reduced = matmul(W, rest)
    else:
        reduced = []
    T = kernel + reduced
    return T, _transform_gram(G, T), k
