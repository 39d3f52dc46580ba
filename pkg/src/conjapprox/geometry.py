"""Symmetric convex bodies, their polars, and successive minima on lattices.

A body here is known only through certified bounds on its gauge
(distance function): ``gauge_bounds(x)`` returns rationals lo <= g(x) <= hi.
Bodies cut out by finitely many functionals whose coefficients are real
intervals are replaced by two rational polytopes, an inner one (gauge hi)
and an outer one (gauge lo), so every later comparison is exact.

Minima are computed on a lattice given by a rational basis.  The basis is
first LLL-reduced on a rounded Euclidean embedding; the unimodular
transform is then applied to the exact basis, so rounding never affects
correctness, only speed.  Two certification tiers exist:

* exhaustive: every lattice vector with lo-gauge below the largest reduced
  basis gauge is enumerated, giving exact matroid-bottleneck minima for the
  lo and hi gauges;
* reduced: upper brackets from the reduced basis, lower brackets from the
  Gram-Schmidt norms of the same basis in a quadratic form dominated by the
  gauge.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial, isqrt

import numpy as np
from scipy.spatial import ConvexHull

from .errors import InfeasibleError, PrecisionExhausted
from .intervals import DEFAULT_BITS, IntervalReal, round_dyadic
from .lattice import enumerate_short, lll_reduce
from .linalg import det, inverse, matvec, rank, solve, transpose


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def sqrt_floor(q, bits=64):
    """Dyadic lower bound for sqrt(q), q >= 0 rational."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    s = 1 << bits
    return Fraction(isqrt((q.numerator * s * s) // q.denominator), s)


def sqrt_ceil(q, bits=64):
    q = Fraction(q)
    lo = sqrt_floor(q, bits)
    if lo * lo == q:
        return lo
    return lo + Fraction(1, 1 << bits)


# -- polytopes -------------------------------------------------------------

class Polytope:
    """Exact symmetric polytope {x : |a_k . x| <= 1 for all rows a_k}."""

    def __init__(self, rows):
        self.rows = [[Fraction(c) for c in r] for r in rows]
        self.dim = len(self.rows[0])
        if rank(self.rows) < self.dim:
            raise ValueError("functionals do not bound the body")
        self._polar_cache = None

    def gauge(self, x):
        return max(abs(_dot(r, x)) for r in self.rows)

    def _bases(self):
        if self._polar_cache is None:
            mats = []
            for S in combinations(range(len(self.rows)), self.dim):
                sub = [self.rows[k] for k in S]
                if det(sub) == 0:
                    continue
                mats.append(inverse(transpose(sub)))
            self._polar_cache = mats
        return self._polar_cache

    def support(self, y):
        """max_{x in P} y . x, computed as an exact linear program via bases."""
        y = [Fraction(c) for c in y]
        best = None
        for M in self._bases():
            v = sum(abs(c) for c in matvec(M, y))
            if best is None or v < best:
                best = v
        return best

    def vertices(self):
        """All vertices, exactly (choose dim active rows and signs)."""
        d = self.dim
        seen = set()
        out = []
        for S in combinations(range(len(self.rows)), d):
            sub = [self.rows[k] for k in S]
            if det(sub) == 0:
                continue
            inv = inverse(sub)
            for mask in range(1 << d):
                rhs = [Fraction(1 if (mask >> i) & 1 else -1) for i in range(d)]
                x = matvec(inv, rhs)
                if self.gauge(x) <= 1:
                    key = tuple(x)
                    if key not in seen:
                        seen.add(key)
                        out.append(x)
        return out

    def volume(self):
        """Exact Euclidean volume.

        Vertices are exact; the facet triangulation comes from Qhull on a
        well-conditioned linear image and is checked exactly (every simplex
        must lie on a facet hyperplane), then the cone volumes are summed in
        rational arithmetic.
        """
        d = self.dim
        verts = self.vertices()
        if d == 1:
            return 2 * max(abs(v[0]) for v in verts)
        # conditioning map: the first invertible set of rows
        for S in combinations(range(len(self.rows)), d):
            L = [self.rows[k] for k in S]
            if det(L) != 0:
                break
        img = [matvec(L, v) for v in verts]
        pts = np.array([[float(c) for c in v] for v in img])
        hull = ConvexHull(pts, qhull_options="Qt")
        total = Fraction(0)
        for simplex in hull.simplices:
            vs = [verts[i] for i in simplex]
            on_facet = any(
                all(_dot(r, v) == s for v in vs) for r in self.rows for s in (1, -1))
            if not on_facet:
                raise PrecisionExhausted("facet triangulation could not be certified")
            total += abs(det(vs))
        return total / factorial(d)


class Sandwich:
    """A symmetric body known between two rational polytopes.

    ``inner`` is contained in the true body, which is contained in
    ``outer``; for exact data both are the same polytope.
    """

    def __init__(self, inner_rows, outer_rows, exact=False):
        self.inner = Polytope(inner_rows)
        self.outer = self.inner if exact else Polytope(outer_rows)
        self.exact = exact
        self.dim = self.inner.dim

    @classmethod
    def from_rows(cls, exact_rows, interval_rows=(), coef_bound=None, bits=96):
        """Build from exact rows and rows with IntervalReal coefficients.

        ``coef_bound`` must satisfy |x_j| <= coef_bound * g(x) on the body
        (true whenever the rows e_j / coef_bound are among the exact rows).
        """
        exact_rows = [[Fraction(c) for c in r] for r in exact_rows]
        if not interval_rows:
            return cls(exact_rows, exact_rows, exact=True)
        inner, outer = list(exact_rows), list(exact_rows)
        for row in interval_rows:
            mids, err = [], Fraction(0)
            for c in row:
                if not isinstance(c, IntervalReal):
                    mids.append(Fraction(c))
                    continue
                m = round_dyadic(c.mid, bits, up=False)
                mids.append(m)
                err += max(c.upper - m, m - c.lower)
            eps = err * coef_bound
            if eps >= 1:
                raise PrecisionExhausted("functional enclosure too wide for the body")
            if eps == 0:
                inner.append(mids)
                outer.append(mids)
            else:
                # dyadic factors keep the rows short; rounding goes outward
                f_in = round_dyadic(1 / (1 - eps), 64, up=True)
                f_out = round_dyadic(1 / (1 + eps), 64, up=False)
                inner.append([m * f_in for m in mids])
                outer.append([m * f_out for m in mids])
        return cls(inner, outer)

    def gauge_bounds(self, x):
        return self.outer.gauge(x), self.inner.gauge(x)

    def quad_rows(self):
        """(R, w) with lo(x)^2 >= sum_k w_k (r_k . x)^2."""
        if getattr(self, "_quad", None) is None:
            R = self.outer.rows
            self._quad = (R, design_weights(R))
        return self._quad

    def volume(self):
        if self.exact:
            v = self.inner.volume()
            return v, v
        return self.inner.volume(), self.outer.volume()

    def polar(self):
        return PolarBody(self)


class PolarBody:
    """Polar of a sandwich body: gauge(y) = max_{x in body} y . x."""

    def __init__(self, primal):
        self.primal = primal
        self.dim = primal.dim
        self._quad = None

    def gauge_bounds(self, y):
        return self.primal.inner.support(y), self.primal.outer.support(y)

    def quad_rows(self):
        if self._quad is None:
            d = self.dim
            ident = [[int(i == j) for j in range(d)] for i in range(d)]
            red, _ = reduce_basis(self.primal, ident)
            pts = []
            for b in red:
                hi = self.primal.inner.gauge(b)
                pts.append([Fraction(c) / hi for c in b])
            self._quad = (pts, design_weights(pts))
        return self._quad


class LinearImage:
    """Body x -> base.gauge(M x) for an invertible rational matrix M."""

    def __init__(self, base, M):
        self.base = base
        self.M = [[Fraction(c) for c in r] for r in M]
        self.dim = len(M)

    def gauge_bounds(self, x):
        return self.base.gauge_bounds(matvec(self.M, x))

    def quad_rows(self):
        R, w = self.base.quad_rows()
        return [matvec(transpose(self.M), r) for r in R], w


# -- reduction and minima ------------------------------------------------

def design_weights(rows, iterations=400):
    """Rational weights w_k >= 0, sum <= 1, nearly maximizing det(sum w_k r_k r_k^T).

    Any such weights give lo(x)^2 >= sum w_k (r_k . x)^2, because the gauge
    is at least max_k |r_k . x|.  Larger determinants mean smaller
    enumeration ellipsoids.  The weights are computed in floating point on
    an orthonormalized copy of the rows and then rounded down.
    """
    m = len(rows)
    A = np.array([[float(c) for c in r] for r in rows])
    d = A.shape[1]
    if m <= d:
        return [Fraction(1, m)] * m
    try:
        Qm, _ = np.linalg.qr(A)
        w = np.full(m, 1.0 / m)
        for _ in range(iterations):
            M = (Qm * w[:, None]).T @ Qm
            lev = np.einsum("ij,jk,ik->i", Qm, np.linalg.inv(M), Qm)
            w = w * lev / d
            w /= w.sum()
        if not np.all(np.isfinite(w)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        return [Fraction(1, m)] * m
    # keep every row slightly weighted so the form stays definite
    w = 0.999 * w + 0.001 / m
    scale = 1 << 30
    out = [Fraction(int(x * scale), scale) for x in w]
    return out


def _embed(body, basis):
    R, w = body.quad_rows()
    roots = [round_dyadic(Fraction(float(x) ** 0.5), 53, up=False) if x else Fraction(0)
             for x in w]
    return [[_dot(r, b) * c for r, c in zip(R, roots)] for b in basis]


def _weighted_gram(body, vecs):
    """Matrix of sum_k w_k (r_k . u)(r_k . v) on the given vectors."""
    R, w = body.quad_rows()
    emb = [[_dot(r, b) for r in R] for b in vecs]
    n = len(vecs)
    G = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            G[i][j] = G[j][i] = sum(wk * a * b for wk, a, b in zip(w, emb[i], emb[j]))
    return G


def reduce_basis(body, basis, extra_bits=40):
    """LLL-reduce ``basis`` (rational rows) for the body's quadratic form.

    Returns (reduced_basis, U) with reduced = U * basis exactly.
    """
    basis = [[Fraction(c) for c in b] for b in basis]
    emb = _embed(body, basis)
    # resolve every coordinate, not just the largest ones: weights can span
    # hundreds of binary orders of magnitude
    cols = [max(abs(v[k]) for v in emb) for k in range(len(emb[0]))]
    smallest = min(c for c in cols if c > 0)
    for attempt in range(6):
        shift = extra_bits * (attempt + 1) - _floor_log2(smallest)
        s = Fraction(2) ** shift
        ints = [[round(c * s) for c in v] for v in emb]
        try:
            _, U = lll_reduce(ints)
        except ValueError:
            continue
        red = [[sum(u * b[j] for u, b in zip(row, basis)) for j in range(len(basis[0]))]
               for row in U]
        return red, U
    raise PrecisionExhausted("lattice embedding lost rank after rounding")


def _floor_log2(q):
    q = abs(Fraction(q))
    return q.numerator.bit_length() - q.denominator.bit_length()


class _Echelon:
    """Incremental linear-independence test over Q."""

    def __init__(self, dim):
        self.rows = []  # (pivot, row) with row[pivot] = 1
        self.dim = dim

    def add(self, v):
        v = [Fraction(c) for c in v]
        for p, r in self.rows:
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        self.rows.append((piv, [c * inv for c in v]))
        return True


def bottleneck_minima(vectors, values, dim):
    """Greedy successive minima: sort by value, keep independent vectors."""
    # ties go to the vector with the smallest l1 norm (monomials first)
    order = sorted(range(len(vectors)),
                   key=lambda i: (values[i], sum(abs(c) for c in vectors[i])))
    ech = _Echelon(dim)
    out_vals, out_vecs = [], []
    for i in order:
        if ech.add(vectors[i]):
            out_vals.append(values[i])
            out_vecs.append(vectors[i])
            if len(out_vals) == dim:
                break
    return out_vals, out_vecs


@dataclass
class MinimaReport:
    lambdas: list            # IntervalReal brackets
    witnesses: list          # lattice vectors (Fraction lists)
    method: str              # "exhaustive" or "reduced"
    reduced_basis: list = field(default_factory=list)
    enumerated: int = 0
    exact: list = None       # the minima as Fractions when the gauge is exact

    @property
    def lo(self):
        return [l.lower for l in self.lambdas]

    @property
    def hi(self):
        return [l.upper for l in self.lambdas]

    @property
    def slack(self):
        """max hi/lo, the certification gap (1 when minima are exact)."""
        return max((l.upper / l.lower for l in self.lambdas if l.lower > 0),
                   default=Fraction(0))

    def to_json(self):
        return [{"i": i + 1,
                 "lambda": l.to_json(),
                 "lo": str(l.lower), "hi": str(l.upper),
                 "witness": [str(c) for c in w]}
                for i, (l, w) in enumerate(zip(self.lambdas, self.witnesses))]


def _bracket(lo, hi, bits):
    return IntervalReal.make(lo, hi, bits)


def successive_minima_of(body, basis, method="exhaustive", max_points=400_000,
                         bits=DEFAULT_BITS):
    """Successive minima of ``body`` on the lattice spanned by ``basis``."""
    d = body.dim
    red, _ = reduce_basis(body, basis)
    his = [body.gauge_bounds(b)[1] for b in red]
    if method == "reduced":
        order = sorted(range(d), key=lambda i: his[i])
        hi_sorted = [his[i] for i in order]
        witnesses = [red[i] for i in order]
        # running max keeps the brackets monotone
        for i in range(1, d):
            hi_sorted[i] = max(hi_sorted[i], hi_sorted[i - 1])
        lo = _gram_schmidt_lower(body, red)
        lams = [_bracket(min(lo[i], hi_sorted[i]), hi_sorted[i], bits) for i in range(d)]
        return MinimaReport(lams, witnesses, "reduced", red)
    if method != "exhaustive":
        raise ValueError("unknown minima method %r" % method)
    r = max(his)
    # quadratic form in reduced coordinates, dominated by lo^2
    Q = _weighted_gram(body, red)
    coords = enumerate_short(Q, r * r, max_points=max_points)
    vecs, los, hs = [], [], []
    for u in coords:
        x = [sum(ui * b[j] for ui, b in zip(u, red)) for j in range(d)]
        lo, hi = body.gauge_bounds(x)
        if lo > r:
            continue
        vecs.append(x)
        los.append(lo)
        hs.append(hi)
    lo_vals, _ = bottleneck_minima(vecs, los, d)
    hi_vals, witnesses = bottleneck_minima(vecs, hs, d)
    if len(lo_vals) < d or len(hi_vals) < d:
        raise InfeasibleError("enumeration did not span the lattice", stage="minima")
    lams = [_bracket(lo_vals[i], hi_vals[i], bits) for i in range(d)]
    exact = list(hi_vals) if lo_vals == hi_vals else None
    return MinimaReport(lams, witnesses, "exhaustive", red, enumerated=len(vecs), exact=exact)


def first_minimum(body, basis, max_points=400_000, exhaustive=True, bits=DEFAULT_BITS):
    """Bracket of the first minimum and a vector attaining the upper end.

    With ``exhaustive`` the ellipsoid that must contain every candidate
    below the best reduced vector is enumerated, so the bracket is
    certified; otherwise only the reduced basis is inspected and the lower
    end is the Gram-Schmidt bound.
    """
    d = body.dim
    red, _ = reduce_basis(body, basis)
    his = [body.gauge_bounds(b)[1] for b in red]
    i = min(range(d), key=lambda k: his[k])
    best_hi, best = his[i], red[i]
    if not exhaustive:
        lo = _gram_schmidt_lower(body, red)[0]
        return _bracket(min(lo, best_hi), best_hi, bits), best, 0
    Q = _weighted_gram(body, red)
    coords = enumerate_short(Q, best_hi * best_hi, max_points=max_points)
    best_lo = best_hi
    for u in coords:
        x = [sum(ui * b[j] for ui, b in zip(u, red)) for j in range(d)]
        lo, hi = body.gauge_bounds(x)
        best_lo = min(best_lo, lo)
        if hi < best_hi:
            best_hi, best = hi, x
    return _bracket(min(best_lo, best_hi), best_hi, bits), best, len(coords)


def _gram_schmidt_lower(body, red):
    """lo_i = min_{j >= i} |b*_j| in the form dominated by the lo-gauge."""
    G = _weighted_gram(body, red)
    d = len(red)
    # squared Gram-Schmidt norms are the pivots of G
    norms = []
    L = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i):
            L[i][j] = (G[i][j] - sum(L[i][k] * L[j][k] * norms[k] for k in range(j))) / norms[j]
        norms.append(G[i][i] - sum(L[i][k] ** 2 * norms[k] for k in range(i)))
    lows = []
    for i in range(d):
        lows.append(sqrt_floor(min(norms[i:])))
    # lower brackets must be non-decreasing as well
    for i in range(1, d):
        lows[i] = max(lows[i], lows[i - 1])
    return lows


def monte_carlo_volume(sandwich, samples=200_000, seed=0):
    """Volume estimate of the outer polytope with a 3-sigma band (not certified)."""
    rng = np.random.default_rng(seed)
    A = np.array([[float(c) for c in r] for r in sandwich.outer.rows])
    d = A.shape[1]
    verts_bound = []
    for j in range(d):
        e = [Fraction(int(k == j)) for k in range(d)]
        verts_bound.append(float(sandwich.outer.support(e)))
    box = np.array(verts_bound)
    pts = (rng.random((samples, d)) * 2 - 1) * box
    inside = np.all(np.abs(pts @ A.T) <= 1, axis=1)
    p = inside.mean()
    box_vol = float(np.prod(2 * box))
    sigma = np.sqrt(max(p * (1 - p), 1e-300) / samples)
    return box_vol * max(p - 3 * sigma, 0.0), box_vol * (p + 3 * sigma)
