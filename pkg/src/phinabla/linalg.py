"""Small exact linear algebra kernels.

Two flavours live here: plain Fraction matrices (used by the Weil-Deligne
layer and by the brute-force oracles) and generic Gaussian elimination over
any exact field element type exposing +, -, *, inverse() and is_zero()
(used for p-adic coefficient solves).  Matrices are tuples/lists of rows.
"""

from __future__ import annotations

from fractions import Fraction


# ---------------------------------------------------------------------------
# Fraction matrices

def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        for l in range(k):
            a = Ai[l]
            if a:
                Bl = B[l]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bl[j]
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_pow(A, k):
    n = len(A)
    out = identity(n)
    base = [list(r) for r in A]
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def trace(A):
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def rref(A):
    """Reduced row echelon form; returns (R, pivot column list)."""
    R = [[Fraction(x) for x in row] for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(A):
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def nullspace(A):
    """Basis of the right kernel (list of column vectors as lists)."""
    if not A:
        return []
    cols = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def column_space(A):
    """Basis of the column space, as a list of column vectors."""
    if not A or not A[0]:
        return []
    R, pivots = rref(transpose(A))
    return [list(R[i]) for i in range(len(pivots))]


def solve(A, b):
    """One solution of A x = b, or None if inconsistent."""
    if not A:
        return [] if all(x == 0 for x in b) else None
    cols = len(A[0])
    aug = [row + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def in_span(v, basis):
    if not basis:
        return all(x == 0 for x in v)
    return solve(transpose(basis), v) is not None


def span_basis(vectors):
    """Reduce a spanning set to a basis (rows of the rref)."""
    if not vectors:
        return []
    R, pivots = rref(vectors)
    return [R[i] for i in range(len(pivots))]


def sum_spaces(basis1, basis2):
    return span_basis(list(basis1) + list(basis2))


def intersect_spaces(basis1, basis2):
    """Basis of the intersection of two spans (vectors as lists)."""
    if not basis1 or not basis2:
        return []
    # x in both spans: x = B1 a = B2 b; solve [B1 | -B2] (a,b)^T = 0
    B1 = transpose(basis1)
    B2 = transpose(basis2)
    stacked = [r1 + [-x for x in r2] for r1, r2 in zip(B1, B2)]
    k1 = len(basis1)
    out = []
    for v in nullspace(stacked):
        a = v[:k1]
        x = [sum(ai * basis1[i][j] for i, ai in enumerate(a))
             for j in range(len(basis1[0]))]
        if any(x):
            out.append(x)
    return span_basis(out)


def same_space(basis1, basis2):
    return (rank(list(basis1) + list(basis2)) == rank(basis1) == rank(basis2)) \
        if (basis1 or basis2) else True


def mat_inv(A):
    n = len(A)
    aug = [[Fraction(x) for x in row] + identity(n)[i]
           for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in R]


def charpoly(A):
    """Characteristic polynomial det(T*I - A), coefficients low-to-high,
    by the Faddeev-LeVerrier recursion."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        c = -trace(M) / k
        coeffs[n - k] = c
        for i in range(n):
            M[i][i] += c
    return coeffs


def is_nilpotent(A):
    n = len(A)
    return all(x == 0 for row in mat_pow(A, n) for x in row)


# ---------------------------------------------------------------------------
# generic exact-field elimination (p-adic coefficients)

def field_kernel(rows, zero, one):
    """Right-kernel basis for a matrix over an exact field.

    ``rows`` is a list of lists of field elements supporting the arithmetic
    protocol of PadicNumber.  Pivots are chosen by minimal valuation when a
    ``valuation`` method exists (p-adically largest pivot first).
    """
    R = [list(r) for r in rows]
    nrows = len(R)
    ncols = len(R[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, nrows):
            x = R[i][c]
            if x.is_zero():
                continue
            key = x.valuation() if hasattr(x, "valuation") else 0
            if best is None or key < best[1]:
                best = (i, key)
        if best is None:
            continue
        i = best[0]
        R[r], R[i] = R[i], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for rr, pc in enumerate(pivots):
            v[pc] = -R[rr][fc]
        basis.append(v)
    return basis


def field_solve(rows, rhs, zero):
    """One solution of (rows) x = rhs over an exact field, or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R = aug
    nrows = len(R)
    pivots = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, nrows):
            x = R[i][c]
            if x.is_zero():
                continue
            key = x.valuation() if hasattr(x, "valuation") else 0
            if best is None or key < best[1]:
                best = (i, key)
        if best is None:
            continue
        i = best[0]
        R[r], R[i] = R[i], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not R[i][ncols].is_zero():
            return None
    x = [zero] * ncols
    for rr, pc in enumerate(pivots):
        x[pc] = R[rr][ncols]
    return x
