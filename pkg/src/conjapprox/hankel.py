"""Hankel matrices of a dual witness and the kernel factor they produce.

For a nonzero y in Q^(n+1) the bilinear form B_l(F, G) = phi(FG, y), with
phi the coefficient pairing, has matrix M_l = (y_{i+j}) on the monomial
bases of E_l and E_(n-l).  Once M_h loses rank, its left kernel holds a
polynomial P of degree <= h which divides every element of the right
kernel V_(h-1) of M_(h-1); in fact V_(h-1) = P * E_(n-2h+1).

Ranks are always decided exactly.  Interval data (transcendental points)
only enters the column-norm and small-value inequalities.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .bodies import BodySpec, body_membership, dual_minima, YES
from .errors import ConfigError, DegenerateInput, InfeasibleError
from .heights import height_matrix, height_polynomial, height_subspace, is_irreducible
from .intervals import DEFAULT_BITS, IntervalReal, PointSpec
from .lattice import enumerate_short, lll_reduce
from .linalg import inverse, left_nullspace, matmul, nullspace, primitive_integer_vector, rank
from .poly import Poly


def _y(y):
    y = [Fraction(c) for c in y]
    if not any(y):
        raise DegenerateInput("the witness y must be nonzero")
    return y


def hankel_matrix(y, ell, n=None):
    """(ell+1) x (n-ell+1) matrix with entries y_{i+j}."""
    y = [Fraction(c) for c in y]
    n = len(y) - 1 if n is None else n
    if len(y) != n + 1:
        raise ConfigError("y must have n + 1 = %d entries" % (n + 1))
    if not 0 <= ell <= n:
        raise ConfigError("need 0 <= ell <= n")
    return [[y[i + j] for j in range(n - ell + 1)] for i in range(ell + 1)]


def pairing(P, y):
    """phi(P, y) = sum_i p_i y_i."""
    return sum(Fraction(c) * Fraction(v) for c, v in zip(P.coeffs, y))


def bilinear_value(F, G, y):
    """B(F, G) = phi(F G, y)."""
    return pairing(F * G, y)


# -- the R_j basis ---------------------------------------------------------

def _extended_points(points, n):
    pts = list(points) + [Fraction(0)] * (n - len(points))
    return pts[:n]


def _as_value(x, bits):
    if isinstance(x, PointSpec):
        return x.exact_value() if x.is_rational else x.enclosure(bits)
    return Fraction(x)


def r_basis(points, count, bits=DEFAULT_BITS):
    """Coefficient lists of R_0 .. R_(count-1), R_j = (T - xi_1)...(T - xi_j).

    Missing points are taken to be 0.  Coefficients are Fractions when all
    points are rational, IntervalReal otherwise.
    """
    xs = [_as_value(x, bits) for x in _extended_points(points, max(count - 1, 0))]
    polys = [[Fraction(1)]]
    for j in range(1, count):
        prev = polys[-1]
        x = xs[j - 1]
        nxt = [0] * (len(prev) + 1)
        for k, c in enumerate(prev):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * x
        polys.append(nxt)
    return polys


def transformed_matrix(y, points, ell, n=None, bits=DEFAULT_BITS):
    """N_l: the matrix of B_l on monomials x (R_0, ..., R_(n-l)).

    Returns (N, V) with M_l = N V.  V is the exact inverse change of basis
    when every point is rational, otherwise None.
    """
    M = hankel_matrix(y, ell, n)
    cols = len(M[0])
    R = r_basis(points, cols, bits)
    C = [[(R[j][k] if k < len(R[j]) else 0) for j in range(cols)] for k in range(cols)]
    N = [[sum((row[k] * C[k][j] for k in range(cols) if not _is_zero(C[k][j])), Fraction(0))
          for j in range(cols)] for row in M]
    exact = all(not isinstance(c, IntervalReal) for col in C for c in col)
    V = inverse([[Fraction(c) for c in row] for row in C]) if exact else None
    return N, V


def _is_zero(c):
    return not isinstance(c, IntervalReal) and c == 0


def _mag(c):
    return c.mag if isinstance(c, IntervalReal) else abs(Fraction(c))


def column_norms(N):
    """Sup norm of each column (upper bounds for interval entries)."""
    return [max(_mag(row[j]) for row in N) for j in range(len(N[0]))]


@dataclass
class ColumnBoundReport:
    norms: list
    near: list        # ||z_j|| / Y for j <= t
    far: list         # ||z_j|| * X for j > t
    c_near: Fraction
    c_far: Fraction

    def to_json(self):
        return {"norms": [str(x) for x in self.norms],
                "c_near": str(self.c_near), "c_far": str(self.c_far)}


def column_bounds(y, points, ell, X, Y, t=None, n=None, bits=DEFAULT_BITS):
    """Measured constants in ||z_j|| <= c Y (j <= t) and ||z_j|| <= c / X (j > t)."""
    t = len(points) if t is None else t
    N, _ = transformed_matrix(y, points, ell, n, bits)
    norms = column_norms(N)
    X, Y = Fraction(X), Fraction(Y)
    near = [v / Y for v in norms[:t]]
    far = [v * X for v in norms[t:]]
    return ColumnBoundReport(norms, near, far, max(near, default=Fraction(0)),
                             max(far, default=Fraction(0)))


def hankel_height_ratio(y, ell, t, X, Y, n=None):
    """H(M_l) / (Y^t X^-(l+1-t)): the measured constant of the height bound."""
    M = hankel_matrix(y, ell, n)
    H = height_matrix(M)
    return Fraction(H) / (Fraction(Y) ** t * Fraction(X) ** (t - ell - 1))


# -- rank drop ----------------------------------------------------------------

@dataclass
class KernelFactorReport:
    met: bool
    ranks: list
    h: int = None
    P: Poly = None
    kernel: list = field(default_factory=list)   # basis of V_(h-1), as Polys
    quotients: list = field(default_factory=list)
    identity_holds: bool = False
    expected_dim: int = None

    def to_json(self):
        out = {"met": self.met, "ranks": self.ranks}
        if self.met:
            out.update({
                "h": self.h,
                "P": [str(c) for c in self.P.coeffs],
                "kernel": [[str(c) for c in K.coeffs] for K in self.kernel],
                "identity_holds": self.identity_holds,
                "expected_dim": self.expected_dim,
            })
        else:
            out["status"] = "hypothesis not met"
        return out


def hankel_ranks(y, k, n=None):
    y = _y(y)
    n = len(y) - 1 if n is None else n
    return [rank(hankel_matrix(y, ell, n)) for ell in range(k + 1)]


def right_kernel(y, ell, n=None):
    """V_l as a list of polynomials of degree <= n - l."""
    M = hankel_matrix(y, ell, n)
    return [Poly(v) for v in nullspace(M)]


def rank_drop_factor(y, k, n=None):
    """Smallest h with rank M_h <= h, and the factor P from the left kernel of M_h."""
    y = _y(y)
    n = len(y) - 1 if n is None else n
    if not 1 <= k <= n // 2:
        raise ConfigError("need 1 <= k <= n/2")
    ranks = hankel_ranks(y, k, n)
    h = next((ell for ell in range(1, k + 1) if ranks[ell] <= ell), None)
    if h is None:
        return KernelFactorReport(False, ranks)
    left = left_nullspace(hankel_matrix(y, h, n))
    # lowest-degree generator: the vector with the fewest trailing coordinates
    P = min((Poly(primitive_integer_vector(v)) for v in left), key=lambda p: p.degree)
    P = P.primitive_part()
    kernel = right_kernel(y, h - 1, n)
    quotients, divides = [], True
    for G in kernel:
        q, r = divmod(G, P)
        divides = divides and not r
        quotients.append(q)
    expected = n - 2 * h + 2
    identity = (divides and len(kernel) == expected
                and (n - h + 2) - ranks[h - 1] == expected and P.degree <= h)
    return KernelFactorReport(True, ranks, h, P, kernel, quotients, identity, expected)


def height_duality(y, h, n=None):
    """(H(M_(h-1)), H(V_(h-1))); the two agree for rational y."""
    y = _y(y)
    n = len(y) - 1 if n is None else n
    M = hankel_matrix(y, h - 1, n)
    V = [[c for c in v] for v in nullspace(M)]
    return height_matrix(M), height_subspace(V)


# -- small values of the kernel factor ---------------------------------------

@dataclass
class SmallValueCheck:
    lhs: object            # IntervalReal or Fraction: min_i (|Q(xi_i)| / ||Q||)^t
    rhs: Fraction          # X^-deg(Q) H(Q)^-(n-2k+2), constant-free
    ratio: object          # lhs / rhs, the measured constant
    vanishes: bool
    degenerate: bool
    index: int

    def to_json(self):
        def s(v):
            return v.to_json() if isinstance(v, IntervalReal) else str(v)
        return {"lhs": s(self.lhs), "rhs": str(self.rhs), "ratio": s(self.ratio),
                "vanishes": self.vanishes, "degenerate": self.degenerate,
                "index": self.index}


def small_value_ratio_check(Q, points, X, k, n, t=None, bits=DEFAULT_BITS):
    """Compare min_i (|Q(xi_i)| / ||Q||)^t with X^-deg(Q) H(Q)^-(n-2k+2)."""
    Q = Q if isinstance(Q, Poly) else Poly(Q)
    if not Q:
        raise DegenerateInput("Q must be nonzero")
    if not points:
        raise ConfigError("the small-value check needs at least one point")
    t = len(points) if t is None else t
    X = Fraction(X)
    if Q.degree == 0:
        one = Fraction(1)
        return SmallValueCheck(one, one, one, False, True, 0)
    norm = Q.norm_inf()
    rhs = X ** (-Q.degree) * Fraction(height_polynomial(Q)) ** (-(n - 2 * k + 2))
    vals = []
    for x in points:
        v = Q(_as_value(x, bits))
        if isinstance(v, IntervalReal):
            vals.append(abs(v) / norm)
        else:
            vals.append(abs(Fraction(v)) / norm)
    lows = [v.lower if isinstance(v, IntervalReal) else v for v in vals]
    i = min(range(len(vals)), key=lambda j: lows[j])
    best = vals[i]
    if not isinstance(best, IntervalReal) and best == 0:
        return SmallValueCheck(Fraction(0), rhs, Fraction(0), True, False, i)
    lhs = best ** t
    return SmallValueCheck(lhs, rhs, lhs / rhs, False, False, i)


# -- auxiliary polynomial ------------------------------------------------------

def _compose_power(G, A, j):
    """G o A^j for a degree-one A given as (slope, intercept)."""
    a, b = Fraction(1), Fraction(0)
    for _ in range(j):
        a, b = A[0] * a, A[0] * b + A[1]
    return G.shift(b).scale(a)


def _iterate_is_identity(A, j):
    a, b = Fraction(1), Fraction(0)
    for _ in range(j):
        a, b = A[0] * a, A[0] * b + A[1]
    return a == 1 and b == 0


def _transforms(case, u, A):
    if case == "derivative":
        def tr(G, j):
            for _ in range(j):
                G = G.derivative()
            return G
        return tr
    if case == "composition":
        return lambda G, j: _compose_power(G, A, j)
    raise ConfigError("case must be derivative or composition")


def _integer_kernel_basis(L, d):
    """Basis of Z^d intersected with the kernel of the rational matrix L."""
    if not L:
        return [[int(i == j) for j in range(d)] for i in range(d)]
    rows = [primitive_integer_vector(r) if any(r) else [0] * d for r in L]
    scale = 1 << 40
    while True:
        B = [[int(i == j) for j in range(d)] + [scale * rows[r][i] for r in range(len(rows))]
             for i in range(d)]
        red, _ = lll_reduce(B)
        kernel_dim = d - rank(L)
        found = [v[:d] for v in red if not any(v[d:])]
        if len(found) >= kernel_dim:
            return found[:kernel_dim]
        scale <<= 40


@dataclass
class AuxiliaryResult:
    G: Poly
    height: int
    family: list           # the u + 1 derived polynomials
    in_kernel: bool
    condition_lhs: Fraction
    condition_rhs: Fraction
    kernel_dim: int

    def to_json(self):
        return {"G": [str(c) for c in self.G.coeffs], "height": self.height,
                "in_kernel": self.in_kernel, "kernel_dim": self.kernel_dim,
                "condition_lhs": str(self.condition_lhs),
                "condition_rhs": str(self.condition_rhs)}


def auxiliary_polynomial(y, k, u, case="derivative", X=None, Y=None, t=1, s=1, A=None,
                         n=None, max_points=200_000):
    """Smallest-height nonzero G in E_(n-2k+2) whose derived family lies in V_(k-1).

    The family is G^(j) (derivative case) or G o A^j (composition case) for
    j = 0..u.  The volume condition (XY)^(t+su) <= c X^(n-2k+3) (with
    su -> u in the composition case) is recorded, not enforced.
    """
    y = _y(y)
    n = len(y) - 1 if n is None else n
    if not 1 <= k <= n // 2 + 1:
        raise ConfigError("k out of range")
    deg = n - 2 * k + 2
    if deg < 0:
        raise ConfigError("n - 2k + 2 must be nonnegative")
    if case == "composition":
        if A is None:
            raise ConfigError("composition case needs A = (slope, intercept)")
        A = (Fraction(A[0]), Fraction(A[1]))
        if A[0] == 0:
            raise ConfigError("A must have degree one")
        for j in range(1, deg + 1):
            if _iterate_is_identity(A, j):
                raise DegenerateInput("A^%d(T) = T" % j)
    tr = _transforms(case, u, A)
    M = hankel_matrix(y, k - 1, n)
    width = n - k + 2
    d = deg + 1
    # linear conditions M * coeff(tr(G, j)) = 0 on the coefficients of G
    L = []
    for j in range(u + 1):
        cols = []
        for e in range(d):
            img = tr(Poly.monomial(e), j).coefficient_list(width)
            cols.append([sum(r[i] * img[i] for i in range(width)) for r in M])
        L.extend([[cols[e][r] for e in range(d)] for r in range(len(M))])
    L = [row for row in L if any(row)]
    basis = _integer_kernel_basis(L, d)
    if X is not None and Y is not None:
        X, Y = Fraction(X), Fraction(Y)
        power = t + (s * u if case == "derivative" else u)
        cond = ((X * Y) ** power, X ** (n - 2 * k + 3))
    else:
        cond = (Fraction(0), Fraction(0))
    if not basis:
        raise InfeasibleError("no nonzero polynomial satisfies the kernel conditions",
                              stage="auxiliary",
                              details={"volume_lhs": str(cond[0]), "volume_rhs": str(cond[1]),
                                       "kernel_dim": 0})
    G = _shortest_sup(basis, d, max_points)
    family = [tr(G, j) for j in range(u + 1)]
    in_kernel = all(
        all(sum(r[i] * F.coefficient_list(width)[i] for i in range(width)) == 0 for r in M)
        for F in family)
    H = int(height_polynomial(G))
    if X is not None and H > X:
        raise InfeasibleError("smallest admissible G has height %d > X" % H, stage="auxiliary",
                              details={"volume_lhs": str(cond[0]), "volume_rhs": str(cond[1]),
                                       "kernel_dim": len(basis)})
    return AuxiliaryResult(G, H, family, in_kernel, cond[0], cond[1], len(basis))


def _shortest_sup(basis, d, max_points):
    """Lattice vector of least sup norm in the lattice spanned by ``basis``."""
    red, _ = lll_reduce(basis)
    best = min(red, key=lambda v: (max(abs(c) for c in v), sum(abs(c) for c in v)))
    bound = max(abs(c) for c in best)
    G = [[sum(a * b for a, b in zip(u, v)) for v in red] for u in red]
    Gf = [[Fraction(c) for c in row] for row in G]
    try:
        for coeffs in enumerate_short(Gf, Fraction(d * bound * bound), max_points):
            v = [sum(c * b[i] for c, b in zip(coeffs, red)) for i in range(d)]
            key = (max(abs(c) for c in v), sum(abs(c) for c in v))
            if key < (max(abs(c) for c in best), sum(abs(c) for c in best)):
                best = v
    except InfeasibleError:
        pass  # keep the reduced-basis candidate
    return Poly(best).primitive_part()


# -- degree and height of the factor ----------------------------------------

@dataclass
class FactorCheck:
    degree_ok: bool
    degree: int
    degree_bound: Fraction
    height: int
    height_ratio: Fraction      # H(Q) / X^(1/(u+1)), as H(Q)^(u+1) / X
    chain_length: int
    periodic: bool

    def to_json(self):
        return {"degree_ok": self.degree_ok, "degree": self.degree,
                "degree_bound": str(self.degree_bound), "height": self.height,
                "height_ratio_pow": str(self.height_ratio),
                "chain_length": self.chain_length, "periodic": self.periodic}


def factor_degree_height_check(Q, G, u, case="derivative", n=None, k=None, X=None, A=None):
    """Degree and height of a factor Q forced by the divisibility structure of G.

    Derivative case: Q^(u+1) must divide G.  Composition case: the chain
    Q, Q o A^-1, ..., Q o A^-(m-1) of pairwise coprime factors must divide G
    (m <= u + 1 maximal).  ``height_ratio`` is H(Q)^(u+1) / X, free of
    fractional powers.
    """
    Q = Q if isinstance(Q, Poly) else Poly(Q)
    G = G if isinstance(G, Poly) else Poly(G)
    if Q.degree < 1 or not G:
        raise DegenerateInput("Q must be nonconstant and G nonzero")
    if n is None or k is None:
        n_k = G.degree
    else:
        n_k = n - 2 * k + 2
    periodic = False
    if case == "derivative":
        if (G % (Q ** (u + 1))):
            raise ConfigError("precondition violated: Q^(u+1) does not divide G")
        chain = u + 1
    elif case == "composition":
        if A is None:
            raise ConfigError("composition case needs A")
        A = (Fraction(A[0]), Fraction(A[1]))
        inv = (1 / A[0], -A[1] / A[0])
        chain_polys = [Q]
        for j in range(1, u + 1):
            nxt = _compose_power(Q, inv, j)
            if any(_common_factor(nxt, c) for c in chain_polys):
                periodic = True
                break
            chain_polys.append(nxt)
        prod = Poly([1])
        for c in chain_polys:
            prod = prod * c
        if G % prod:
            raise ConfigError("precondition violated: the composition chain of Q does not divide G")
        chain = len(chain_polys)
    else:
        raise ConfigError("case must be derivative or composition")
    bound = Fraction(n_k, u + 1)
    H = int(height_polynomial(Q))
    ratio = Fraction(H) ** (u + 1) / Fraction(X) if X is not None else None
    ok = Q.degree <= bound or (periodic and Q.degree == 1)
    return FactorCheck(ok, Q.degree, bound, H, ratio, chain, periodic)


def _common_factor(a, b):
    from .poly import poly_gcd

    return poly_gcd(a, b).degree > 0


# -- proof presets and dual witnesses ----------------------------------------

def proof_parameters(ledger):
    """k = floor((n+2) t / nu) and u = D t, as used in the contradiction argument."""
    k = (ledger.n + 2) * ledger.t // ledger.nu
    return {"k": k, "u": ledger.D * ledger.t}


@dataclass
class DualWitness:
    y: list
    spec: BodySpec
    certified: bool

    def to_json(self):
        return {"y": [str(c) for c in self.y], "certified": self.certified,
                "n": self.spec.n, "X": str(self.spec.X), "Y": str(self.spec.Y),
                "points": [p.to_text() for p in self.spec.points]}


def dual_witnesses(spec, method="reduced"):
    """Nonzero lattice points of the dual body found among its minima witnesses."""
    report = dual_minima(spec, method=method)
    dspec = BodySpec(spec.n, spec.points, spec.multiplicities, spec.X, spec.Y, which="Cphi",
                     bits=spec.bits)
    out = []
    for w in report.witnesses:
        if body_membership(Poly(w), dspec) == YES:
            out.append(DualWitness([Fraction(c) for c in w], dspec, True))
    return out, report


def diagnose(y, points, X, Y, k, u=None, n=None, case="derivative", A=None):
    """Run the rank-drop chain on one witness and collect every measured quantity."""
    y = _y(y)
    n = len(y) - 1 if n is None else n
    t = len(points)
    out = {"n": n, "k": k, "ranks": hankel_ranks(y, min(k, n // 2), n)}
    out["height_ratios"] = [str(hankel_height_ratio(y, ell, t, X, Y, n))
                            for ell in range(min(k, n // 2) + 1)]
    cb = column_bounds(y, points, min(k, n // 2), X, Y, t, n)
    out["column_bounds"] = cb.to_json()
    if 1 <= k <= n // 2:
        rep = rank_drop_factor(y, k, n)
        out["rank_drop"] = rep.to_json()
        if rep.met and rep.P.degree >= 1 and points:
            factors = _irreducible_factors(rep.P)
            out["factors"] = []
            for Qf in factors:
                chk = small_value_ratio_check(Qf, points, X, k, n, t)
                out["factors"].append({"Q": [str(c) for c in Qf.coeffs], "small_value": chk.to_json()})
    if u is not None:
        try:
            aux = auxiliary_polynomial(y, k, u, case, X, Y, t=t, A=A, n=n)
            out["auxiliary"] = aux.to_json()
        except InfeasibleError as exc:
            out["auxiliary"] = {"infeasible": str(exc), "details": exc.details}
    return out


def _irreducible_factors(P):
    from sympy import Poly as SymPoly
    from sympy import factor_list, symbols

    T = symbols("T")
    ints = P.primitive_part().integer_coefficients()
    _, facs = factor_list(SymPoly(list(reversed(ints)), T))
    out = []
    for f, _ in facs:
        coeffs = [int(c) for c in reversed(SymPoly(f, T).all_coeffs())]
        out.append(Poly(coeffs))
    return out
