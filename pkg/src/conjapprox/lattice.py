"""Integral LLL reduction and exact Fincke-Pohst enumeration.

``lll_reduce`` is the all-integer variant of the LLL algorithm (Cohen,
*A Course in Computational Algebraic Number Theory*, Alg. 2.6.7): the
Gram-Schmidt data is kept as scaled integers so no rational arithmetic is
needed.  ``enumerate_short`` lists every integer vector inside an ellipsoid
given by a rational positive-definite form; comparisons are exact.
"""

from fractions import Fraction
from math import isqrt

from .errors import InfeasibleError


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis, delta=Fraction(99, 100), track=True):
    """LLL-reduce the rows of an integer matrix.

    Parameters
    ----------
    basis : list of list of int
        Linearly independent row vectors.
    delta : Fraction
        Lovasz constant, 1/4 < delta <= 1.
    track : bool
        Also return the unimodular transform ``U`` with ``reduced = U * basis``.

    Returns
    -------
    reduced, U  (U is None when ``track`` is False)
    """
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return [], []
    U = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
    dp, dq = Fraction(delta).numerator, Fraction(delta).denominator

    # d[0] = 1, d[i+1] = det Gram of first i+1 vectors; lam[i][j] for j < i
    d = [0] * (n + 1)
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def gso_row(k):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("basis vectors are linearly dependent")
                d[k + 1] = u

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            if U is not None:
                U[k] = [x - q * y for x, y in zip(U[k], U[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        if U is not None:
            U[k], U[k - 1] = U[k - 1], U[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    gso_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gso_row(k)
        red(k, k - 1)
        lm = lam[k][k - 1]
        if dq * d[k + 1] * d[k - 1] < dp * d[k] * d[k] - dq * lm * lm:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b, U


def gram_schmidt_norms(basis):
    """Squared Gram-Schmidt norms |b_i*|^2 as Fractions (for checks)."""
    n = len(basis)
    bstar = []
    norms = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu = _dot(basis[i], bstar[j]) / norms[j]
            v = [a - mu * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    return norms


def is_lll_reduced(basis, delta=Fraction(99, 100)):
    n = len(basis)
    bstar, norms = [], []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = _dot(basis[i], bstar[j]) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def _ldl(Q):
    """Q = L^T D L style decomposition used by Fincke-Pohst.

    Returns (q_diag, q_off) with
    x^T Q x = sum_i q_diag[i] * (x_i + sum_{j>i} q_off[i][j] x_j)^2.
    """
    n = len(Q)
    q = [[Fraction(x) for x in row] for row in Q]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("quadratic form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    diag = [q[i][i] for i in range(n)]
    off = [[q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return diag, off


def _int_range(center, bound):
    """Integers x with (x - center)^2 <= bound, center and bound rational."""
    if bound < 0:
        return range(0)
    # floor(sqrt(bound)) computed exactly, then widen by one and trim.
    num, den = bound.numerator, bound.denominator
    s = isqrt(num * den) // den + 1
    lo = (center - s).__floor__()
    hi = (center + s).__ceil__()
    while lo <= hi and (lo - center) ** 2 > bound:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > bound:
        hi -= 1
    return range(lo, hi + 1)


def enumerate_short(Q, radius_sq, max_points=500_000, include_zero=False):
    """All integer x with x^T Q x <= radius_sq, up to sign (first nonzero > 0).

    Exact: Q and radius_sq are rationals.  Raises InfeasibleError when more
    than ``max_points`` vectors would be produced.
    """
    n = len(Q)
    diag, off = _ldl(Q)
    R = Fraction(radius_sq)
    out = []
    x = [0] * n

    def rec(i, remaining):
        center = -sum(off[i][j] * x[j] for j in range(i + 1, n))
        for xi in _int_range(center, remaining / diag[i]):
            x[i] = xi
            rest = remaining - diag[i] * (xi - center) ** 2
            if i == 0:
                out.append(list(x))
                if len(out) > 2 * max_points + 1:
                    raise InfeasibleError(
                        "enumeration budget exceeded", stage="enumerate",
                        details={"max_points": max_points})
            else:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, R)
    result = []
    for v in out:
        first = next((c for c in v if c != 0), 0)
        if first > 0 or (first == 0 and include_zero):
            result.append(v)
    return result
