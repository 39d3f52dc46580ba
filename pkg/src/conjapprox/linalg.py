"""Exact linear algebra over the rationals.

Matrices are plain lists of rows.  Entries may be ints or Fractions; results
are Fractions (or ints where the algorithm is fraction-free).  Nothing here
touches floating point, so rank and kernel decisions are exact.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm


def as_fraction_matrix(M):
    return [[Fraction(x) for x in row] for row in M]


def shape(M):
    return len(M), (len(M[0]) if M else 0)


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def integer_rows(M):
    """Scale each row by the lcm of its denominators, returning int rows."""
    out = []
    for row in M:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def primitive_integer_vector(v):
    """Integer multiple of ``v`` with coprime entries (sign normalized so the
    first nonzero entry is positive)."""
    (row,) = integer_rows([v])
    g = 0
    for x in row:
        g = gcd(g, x)
    if g == 0:
        return row
    row = [x // g for x in row]
    for x in row:
        if x:
            if x < 0:
                row = [-y for y in row]
            break
    return row


def det(M):
    """Determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in M):
        raise ValueError("det of a non-square matrix")
    # Clear denominators row by row so Bareiss runs on integers.
    scale = Fraction(1)
    A = []
    for row in M:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        scale /= den
        A.append([int(x * den) for x in row])
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
                return Fraction(0)
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            rowi = A[i]
            rowk = A[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return Fraction(sign * A[n - 1][n - 1]) * scale


def rank(M):
    """Rank by fraction-free (Bareiss-style) elimination on integerized rows."""
    if not M:
        return 0
    A = integer_rows(M)
    rows, cols = len(A), len(A[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        arc = A[r][c]
        for i in range(r + 1, rows):
            aic = A[i][c]
            rowi, rowr = A[i], A[r]
            for j in range(c, cols):
                rowi[j] = (rowi[j] * arc - aic * rowr[j]) // prev
        prev = arc
        r += 1
        if r == rows:
            break
    return r


def rref(M):
    """Reduced row echelon form over Q.  Returns (R, pivot_columns)."""
    A = as_fraction_matrix(M)
    rows, cols = shape(A)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def nullspace(M, ncols=None):
    """Basis of the right kernel {x : M x = 0}, one vector per free column."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(M)
    cols = len(R[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def left_nullspace(M):
    """Basis of {x : x^T M = 0}."""
    return nullspace(transpose(M), ncols=len(M))


def solve(M, b):
    """Unique solution of M x = b for square invertible M."""
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(M):
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def maximal_minors(M):
    """All minors of order m of an m x n matrix (m <= n), in column-subset order."""
    m, n = shape(M)
    if m > n:
        raise ValueError("need at least as many columns as rows")
    cols = transpose(M)
    return [det(transpose([cols[j] for j in S])) for S in combinations(range(n), m)]
