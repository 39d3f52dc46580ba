"""Convex bodies of polynomials over Q as lattice problems.

``BodySpec`` describes one of three bodies attached to target points:

* ``C``:    ||P|| <= X and |P^(j)(eta_i)| <= 1/Y for j < m_i,
* ``Cbar``: ||Q|| <= Y and |Q(xi_i)| <= 1/X for the continuation points,
* ``Cphi``: the polar of ``C`` under the coefficient pairing, on Z^(n+1).

At every prime the body is the unit ball of Z_p^(n+1) (or a multiple when a
lattice scale is set), so minima are lattice minima of the real component
on Z^(n+1).  The covolume of Z^(n+1) is 1, which makes the Euclidean volume
of the real component the adelic volume.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial

from .errors import ConfigError, DegenerateInput, InfeasibleError, PrecisionExhausted
from .geometry import (LinearImage, MinimaReport, Sandwich, monte_carlo_volume,
                       successive_minima_of)
from .intervals import DEFAULT_BITS, MAX_BITS, IntervalReal, PointSpec
from .invariant_form import InvariantForm
from .linalg import inverse, matvec, transpose
from .places import REAL, Place, abs_at_place, valuation
from .poly import Poly

BODY_KINDS = ("C", "Cbar", "Cphi")


@dataclass(frozen=True)
class BodySpec:
    n: int
    points: tuple = ()
    multiplicities: tuple = ()
    X: Fraction = Fraction(1)
    Y: Fraction = Fraction(1)
    which: str = "C"
    continuation: tuple = ()
    lattice_scale: Fraction = Fraction(1)
    rescaled: bool = False
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        object.__setattr__(self, "X", Fraction(self.X))
        object.__setattr__(self, "Y", Fraction(self.Y))
        object.__setattr__(self, "lattice_scale", Fraction(self.lattice_scale))
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "continuation", tuple(self.continuation))
        if not self.multiplicities:
            object.__setattr__(self, "multiplicities", tuple(1 for _ in self.points))
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        if self.which not in BODY_KINDS:
            raise ConfigError("body must be one of %s" % ", ".join(BODY_KINDS))
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if len(self.multiplicities) != len(self.points) or any(m < 1 for m in self.multiplicities):
            raise ConfigError("one positive multiplicity per point is required")
        if self.X <= 0 or self.Y <= 0 or self.lattice_scale <= 0:
            raise ConfigError("X, Y and the lattice scale must be positive")
        if not self.rescaled and (self.X < 1 or self.Y < 1):
            raise ConfigError("X and Y must be at least 1")
        if self.t > self.n:
            raise ConfigError("total multiplicity t = %d exceeds n = %d" % (self.t, self.n))
        if self.which == "Cbar" and self.t + len(self.continuation) != self.n + 1:
            raise ConfigError("Cbar needs n + 1 - t continuation points")
        _check_distinct(list(self.points) + list(self.continuation), self.bits)

    @property
    def t(self):
        return sum(self.multiplicities)

    @property
    def dim(self):
        return self.n + 1

    def with_xy(self, X, Y):
        return replace(self, X=Fraction(X), Y=Fraction(Y))


def _check_distinct(points, bits):
    """Distinct points must have disjoint enclosures at some precision."""
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            a, b = points[i], points[j]
            if a == b:
                raise DegenerateInput("repeated point %s" % a)
            if a.is_rational and b.is_rational:
                if a.exact_value() == b.exact_value():
                    raise DegenerateInput("points %s and %s coincide" % (a, b))
                continue
            k = bits
            while True:
                if not a.enclosure(k).overlaps(b.enclosure(k)):
                    break
                if k >= MAX_BITS:
                    raise DegenerateInput("points %s and %s are indistinguishable" % (a, b))
                k *= 2


# -- functionals ----------------------------------------------------------

def point_row(x, n, deriv=0, weight=Fraction(1), bits=DEFAULT_BITS):
    """Coefficients of P -> weight * P^(deriv)(x) on E_n (exact or intervals)."""
    row = []
    if x.is_rational:
        v = x.exact_value()
        for k in range(n + 1):
            c = Fraction(0) if k < deriv else \
                Fraction(factorial(k) // factorial(k - deriv)) * v ** (k - deriv)
            row.append(c * weight)
        return row
    enc = x.enclosure(bits + 32)
    w = weight if isinstance(weight, IntervalReal) else IntervalReal.point(weight, bits + 32)
    for k in range(n + 1):
        if k < deriv:
            row.append(Fraction(0))
        else:
            row.append(enc ** (k - deriv) * w * (factorial(k) // factorial(k - deriv)))
    return row


def _is_interval_row(row):
    return any(isinstance(c, IntervalReal) for c in row)


def _assemble(exact, rows, coef_bound, bits):
    exact = list(exact)
    interval = []
    for r in rows:
        (interval if _is_interval_row(r) else exact).append(r)
    return Sandwich.from_rows(exact, interval, coef_bound=coef_bound, bits=bits)


def _coef_rows(n, bound):
    return [[Fraction(int(i == j)) / bound for j in range(n + 1)] for i in range(n + 1)]


def primal_sandwich(spec, bits=96):
    """Rational inner/outer polytopes for the real component of C or Cbar."""
    n = spec.n
    if spec.which in ("C", "Cphi"):
        rows = []
        for eta, m in zip(spec.points, spec.multiplicities):
            for j in range(m):
                rows.append(point_row(eta, n, j, spec.Y, spec.bits))
        return _assemble(_coef_rows(n, spec.X), rows, spec.X, bits)
    rows = [point_row(xi, n, 0, spec.X, spec.bits) for xi in spec.continuation]
    return _assemble(_coef_rows(n, spec.Y), rows, spec.Y, bits)


def lattice_step(spec):
    """Generator of the lattice: s Z^d for C and Cbar, (1/s) Z^d for the dual."""
    return 1 / spec.lattice_scale if spec.which == "Cphi" else spec.lattice_scale


def body_of(spec, bits=96):
    """(gauge body, lattice basis) for a spec."""
    d = spec.dim
    step = lattice_step(spec)
    basis = [[step * int(i == j) for j in range(d)] for i in range(d)]
    sand = primal_sandwich(spec, bits)
    if spec.which == "Cphi":
        return sand.polar(), basis
    return sand, basis


# -- operations -----------------------------------------------------------

YES, NO, UNKNOWN = "yes", "no", "unknown"


def body_membership(P, spec, slack=Fraction(1)):
    """Certified verdict on P in slack * body (slack may be an IntervalReal)."""
    if isinstance(P, Poly):
        if P.degree > spec.n:
            raise ConfigError("polynomial degree exceeds n")
        x = P.coefficient_list(spec.dim)
    else:
        x = [Fraction(c) for c in P]
    s_lo = slack.lower if isinstance(slack, IntervalReal) else Fraction(slack)
    s_hi = slack.upper if isinstance(slack, IntervalReal) else Fraction(slack)
    # a point outside the lattice is never a member of the adelic body
    if any((c / lattice_step(spec)).denominator != 1 for c in x):
        return NO
    bits = 96
    while True:
        body, _ = body_of(replace(spec, bits=max(spec.bits, 2 * bits)), bits)
        lo, hi = body.gauge_bounds(x)
        if hi <= s_lo:
            return YES
        if lo > s_hi:
            return NO
        if bits >= MAX_BITS:
            return UNKNOWN
        bits *= 2


def successive_minima(spec, method="exhaustive", max_points=400_000):
    if method == "exhaustive" and spec.n > 6:
        raise ConfigError("exhaustive minima are limited to n <= 6")
    if method == "reduced" and spec.n > 24:
        raise ConfigError("reduced minima are limited to n <= 24")
    body, basis = body_of(spec)
    report = successive_minima_of(body, basis, method, max_points=max_points, bits=spec.bits)
    report.method = method
    return report


def body_volume(spec, samples=200_000, seed=0):
    """Enclosure of the volume of the real component (exact for n <= 6).

    For larger n a Monte Carlo estimate with a 3-sigma band is returned and
    the second element of the result is the tag "monte-carlo".
    """
    if spec.which == "Cphi":
        raise ConfigError("volume is implemented for C and Cbar")
    sand = primal_sandwich(spec)
    if spec.n <= 6:
        lo, hi = sand.volume()
        return IntervalReal.make(lo, hi, spec.bits), "exact"
    lo, hi = monte_carlo_volume(sand, samples, seed)
    return IntervalReal.make(Fraction(lo), Fraction(hi), 53), "monte-carlo"


def volume_bounds(spec):
    """Unrounded (lower, upper) volume of the real component for n <= 6."""
    if spec.which == "Cphi" or spec.n > 6:
        raise ConfigError("exact volume bounds need a C or Cbar body with n <= 6")
    return primal_sandwich(spec).volume()


def minkowski_product(report, volume):
    """Certified upper bound of (lambda_1 ... lambda_d) * Vol.

    ``volume`` is an IntervalReal or an unrounded (lower, upper) pair; with
    exact minima and an exact volume the product is exact.
    """
    prod = Fraction(1)
    for h in (report.exact or report.hi):
        prod *= h
    upper = volume[1] if isinstance(volume, tuple) else volume.upper
    return prod * upper


# -- duality ---------------------------------------------------------------

def form_gram(F):
    return F.gram()


def dual_body(spec, pairing=None):
    """(body, lattice basis) of the dual of C under phi (None) or a form."""
    if spec.which != "C":
        raise ConfigError("duals are taken of a C body")
    sand = primal_sandwich(spec)
    polar = sand.polar()
    d = spec.dim
    if pairing is None:
        basis = [[Fraction(int(i == j)) / spec.lattice_scale for j in range(d)] for i in range(d)]
        return polar, basis
    if not isinstance(pairing, InvariantForm) or pairing.n != spec.n:
        raise ConfigError("pairing must be an invariant form on E_n")
    G = form_gram(pairing)
    Ginv = inverse(G)
    # lattice {q : G q in Z^d}, gauge q -> support_C(G q)
    basis = [[Ginv[r][c] / spec.lattice_scale for r in range(d)] for c in range(d)]
    return LinearImage(polar, G), basis


def dual_minima(spec, pairing=None, method="exhaustive", max_points=400_000):
    """Minima of the dual of C(X,Y) under phi or an invariant form."""
    if method == "exhaustive" and spec.n > 6:
        raise ConfigError("exhaustive minima are limited to n <= 6")
    body, basis = dual_body(spec, pairing)
    rep = successive_minima_of(body, basis, method, max_points=max_points, bits=spec.bits)
    return rep


def mahler_products(primal, dual):
    """[lo, hi] of lambda_i * lambda*_{d+1-i} for each i."""
    d = len(primal.lambdas)
    out = []
    for i in range(d):
        a, b = primal.lambdas[i], dual.lambdas[d - 1 - i]
        out.append((a.lower * b.lower, a.upper * b.upper))
    return out


# -- rescaling -------------------------------------------------------------

@dataclass(frozen=True)
class PlaceScaling:
    """Idele with finitely many nontrivial components, keyed by place."""

    factors: tuple = ()  # ((Place, Fraction), ...)

    def __post_init__(self):
        for v, r in self.factors:
            if Fraction(r) == 0:
                raise ConfigError("scaling factors must be nonzero")

    @classmethod
    def of(cls, mapping):
        return cls(tuple((v, Fraction(r)) for v, r in mapping.items()))

    @property
    def real_factor(self):
        for v, r in self.factors:
            if v.is_archimedean:
                return abs(Fraction(r))
        return Fraction(1)

    @property
    def content(self):
        c = Fraction(1)
        for v, r in self.factors:
            c *= abs_at_place(r, v)
        return c

    def lattice_factor(self):
        """s with prod_p rho_p Z_p = s Z (only the p-adic size matters)."""
        s = Fraction(1)
        for v, r in self.factors:
            if not v.is_archimedean:
                s *= Fraction(v.p) ** valuation(r, v.p)
        return s


def rescale_body(spec, rho):
    """Parameters of rho * body, with real scaling folded into X and Y."""
    r = rho.real_factor
    if spec.which in ("C", "Cphi"):
        X, Y = spec.X * r, spec.Y / r
    else:
        X, Y = spec.X / r, spec.Y * r
    return replace(spec, X=X, Y=Y, lattice_scale=spec.lattice_scale * rho.lattice_factor(),
                   rescaled=True)


def rescale_bracket(spec, rho, method="exhaustive"):
    """Measured content * lambda_i(rho C) / lambda_i(C) brackets.

    Returns (new_spec, list of (lo, hi) ratios).
    """
    new = rescale_body(spec, rho)
    a = successive_minima(spec, method)
    b = successive_minima(new, method)
    c = rho.content
    ratios = [(c * lb.lower / la.upper, c * lb.upper / la.lower)
              for la, lb in zip(a.lambdas, b.lambdas)]
    return new, ratios


# -- member construction --------------------------------------------------

@dataclass
class MemberResult:
    P: Poly
    coefficients: list        # integer coordinates in the reduced basis
    real_scale: Fraction      # certified: P - P_real in real_scale * C_w
    modulus: int              # product of prime-power moduli
    basis_bound: Fraction     # hi of the largest basis vector


def construct_member(spec, local_targets, report=None):
    """A polynomial with prescribed real and p-adic behaviour.

    ``local_targets`` is a list of (place, target, scale).  At a prime p the
    scale is an integer k and the condition is P = target (mod p^k); at the
    real place the condition is P - target in scale * C_w.  Targets at
    primes must have integer coefficients.
    """
    if spec.which != "C":
        raise ConfigError("members are constructed in a C body")
    if spec.lattice_scale != 1:
        raise ConfigError("member construction assumes the integer lattice")
    d = spec.dim
    if report is None:
        report = successive_minima(spec, "reduced")
    basis = [[Fraction(c) for c in w] for w in report.witnesses]
    lam = report.hi[-1]
    body = primal_sandwich(spec)

    real_target, real_scale = Poly(), None
    modulus, residues = 1, [0] * d
    Bt = transpose(basis)
    Binv = inverse(Bt)  # coordinates: theta = Binv * coeffs
    for place, target, scale in local_targets:
        target = target if isinstance(target, Poly) else Poly(target)
        if target.degree > spec.n:
            raise ConfigError("target degree exceeds n")
        if place.is_archimedean:
            real_target, real_scale = target, Fraction(scale)
            continue
        if not target.is_integral:
            raise ConfigError("prime targets need integer coefficients")
        q = place.p ** int(scale)
        theta = matvec(Binv, target.coefficient_list(d))
        if any(c.denominator != 1 for c in theta):
            raise InfeasibleError("reduced basis is not unimodular", stage="construct")
        # CRT merge of residues
        new_mod = modulus * q
        for i in range(d):
            residues[i] = _crt(residues[i], modulus, int(theta[i]) % q, q)
        modulus = new_mod

    if real_scale is None and not local_targets:
        # no targets at all: any basis vector is a member
        P = Poly(basis[0])
        return MemberResult(P, [1] + [0] * (d - 1), lam, 1, lam)

    bound = Fraction(d * modulus, 2) * lam
    if real_scale is not None and real_scale < bound:
        raise InfeasibleError(
            "real budget %s is below d * M / 2 * lambda_d = %s" % (real_scale, bound),
            stage="construct",
            details={"budget": str(real_scale), "required": str(bound)})
    theta_w = matvec(Binv, real_target.coefficient_list(d))
    coeffs = [_nearest_in_class(t, r, modulus) for t, r in zip(theta_w, residues)]
    P = Poly([sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(d)])
    diff = (P - real_target).coefficient_list(d)
    achieved = body.gauge_bounds(diff)[1]
    return MemberResult(P, coeffs, achieved, modulus, lam)


def _crt(r1, m1, r2, m2):
    from sympy.ntheory.modular import crt

    if m1 == 1:
        return r2 % m2
    res = crt([m1, m2], [r1, r2])
    if res is None:
        raise InfeasibleError("incompatible congruences", stage="construct")
    return int(res[0])


def _nearest_in_class(theta, r, m):
    """Integer a = r (mod m) nearest to theta."""
    k = ((theta - r) / m)
    k = (k + Fraction(1, 2)).__floor__()
    return r + k * m


def is_eisenstein(P, p):
    c = P.integer_coefficients()
    return (c[-1] % p != 0 and all(x % p == 0 for x in c[:-1])
            and c[0] % (p * p) != 0)


# -- comparison of the form dual with Cbar ---------------------------------

def _ipoly_mul(a, b, bits):
    out = [IntervalReal.point(0, bits)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def lagrange_basis(points, bits):
    """Interval coefficient lists of the Lagrange polynomials at ``points``."""
    enc = [p.enclosure(bits) for p in points]
    out = []
    for i, xi in enumerate(enc):
        poly = [IntervalReal.point(1, bits)]
        for j, xj in enumerate(enc):
            if j != i:
                inv = (xi - xj).reciprocal()
                poly = _ipoly_mul(poly, [-xj * inv, inv], bits)
        out.append(poly)
    return out


@dataclass
class FormSandwich:
    """Idele components alpha, beta with alpha Cbar <= C^g <= beta Cbar.

    Real components are given by their absolute values; prime components by
    |alpha_p|_p and |beta_p|_p (primes with value 1 are omitted).
    """

    alpha_real: Fraction
    beta_real: Fraction
    alpha_primes: dict
    beta_primes: dict
    pairing_bound: Fraction   # c with |g_w(P,Q)| <= c on C_w x Cbar_w
    theta: Fraction           # Lagrange scaling constant

    def to_json(self):
        return {"alpha_real": str(self.alpha_real), "beta_real": str(self.beta_real),
                "alpha_primes": {str(p): str(v) for p, v in self.alpha_primes.items()},
                "beta_primes": {str(p): str(v) for p, v in self.beta_primes.items()},
                "pairing_bound": str(self.pairing_bound), "theta": str(self.theta)}


def form_sandwich_constants(F, points, t, bits=DEFAULT_BITS):
    """Containment constants between the form dual of C and Cbar.

    ``points`` is the whole progression xi_1..xi_{n+1}; C uses the first t
    of them and Cbar the rest.  The constants depend only on the points and
    the form, never on X or Y.
    """
    n = F.n
    if len(points) != n + 1 or not 1 <= t <= n:
        raise ConfigError("need n + 1 progression points and 1 <= t <= n")
    enc = [p.enclosure(bits) for p in points]
    if F.case.is_additive:
        rho = IntervalReal.point(1, bits)
    else:
        rho = enc[0].reciprocal() ** n
    s = []
    for x in enc:
        m = abs(x).upper
        s.append(sum(m ** l for l in range(n + 1)))
    c = Fraction(0)
    for i in range(n + 1):
        for j in range(i, n + 1):
            gij = F.table[i][j]
            if not gij:
                continue
            if j < t:
                w = s[j]
            elif i < t:
                w = Fraction(1)
            else:
                w = s[i]
            c += abs(gij) * rho.mag * w
    alpha = 1 / c
    # Lagrange basis scale and the inverse Vandermonde row-sum norm
    L = lagrange_basis(points, bits)
    theta = max(Fraction(1), max(max(cf.mag for cf in poly) for poly in L))
    vinv = max(sum(L[i][k].mag for i in range(n + 1) if k < len(L[i]))
               for k in range(n + 1))
    # U = rho * g (upper triangular); r_j = sum_i |U^-1_{ji}|
    U = [[rho * F.table[i][j] if j >= i else IntervalReal.point(0, bits)
          for j in range(n + 1)] for i in range(n + 1)]
    Uinv = _upper_inverse(U, bits)
    r = [sum(Uinv[j][i].mag for i in range(j, n + 1)) for j in range(n + 1)]
    beta = theta * max(max(r) * vinv, max(r[t:]))
    # prime components from the Gram matrix of g
    G = F.gram()
    Ginv = inverse(G)
    primes = set()
    for M in (G, Ginv):
        for row in M:
            for x in row:
                if x:
                    from .places import support
                    primes.update(support(x))
    alpha_p, beta_p = {}, {}
    for p in sorted(primes):
        v = Place.prime(p)
        gn = max(abs_at_place(x, v) for row in G for x in row)
        gin = max(abs_at_place(x, v) for row in Ginv for x in row)
        if gn != 1:
            alpha_p[p] = 1 / gn
        if gin != 1:
            beta_p[p] = gin
    return FormSandwich(alpha, beta, alpha_p, beta_p, c, theta)


def _upper_inverse(U, bits):
    n = len(U)
    inv = [[IntervalReal.point(0, bits) for _ in range(n)] for _ in range(n)]
    for j in range(n):
        inv[j][j] = U[j][j].reciprocal()
    for k in range(1, n):
        for i in range(n - k):
            j = i + k
            acc = IntervalReal.point(0, bits)
            for m in range(i + 1, j + 1):
                acc = acc + U[i][m] * inv[m][j]
            inv[i][j] = -(acc * inv[i][i])
    return inv


def progression_specs(points, t, X, Y):
    """(C spec, Cbar spec) for a progression xi_1..xi_{n+1}."""
    n = len(points) - 1
    C = BodySpec(n, tuple(points[:t]), X=X, Y=Y, which="C")
    Cb = BodySpec(n, tuple(points[:t]), X=X, Y=Y, which="Cbar",
                  continuation=tuple(points[t:]))
    return C, Cb


@dataclass
class SandwichCheck:
    constants: FormSandwich
    inner_ok: bool        # every alpha-scaled Cbar witness lies in C^g
    outer_ok: bool        # every C^g witness lies in beta * Cbar
    primes_ok: bool       # exact containment at the primes
    inner_extreme: Fraction  # max gauge_{C^g}(q) over alpha Cbar witnesses
    outer_extreme: Fraction  # max gauge_{Cbar}(q) / beta over C^g witnesses
    witnesses: int


def verify_form_sandwich(F, points, t, X, Y, directions, constants=None):
    """Check alpha Cbar <= C^g <= beta Cbar on boundary witnesses.

    ``directions`` are nonzero rational vectors; each one is scaled onto the
    boundary of alpha Cbar (first test) and of C^g (second test).
    """
    const = constants or form_sandwich_constants(F, points, t)
    C, Cb = progression_specs(points, t, X, Y)
    cbar = primal_sandwich(Cb)
    cg, _ = dual_body(C, F)
    inner_ok = outer_ok = True
    inner_ext = outer_ext = Fraction(0)
    for q in directions:
        q = [Fraction(c) for c in q]
        hq = cbar.gauge_bounds(q)[1]
        qb = [const.alpha_real * c / hq for c in q]
        g_hi = cg.gauge_bounds(qb)[1]
        inner_ext = max(inner_ext, g_hi)
        inner_ok &= g_hi <= 1
        gq = cg.gauge_bounds(q)[1]
        qc = [c / gq for c in q]
        b_hi = cbar.gauge_bounds(qc)[1]
        outer_ext = max(outer_ext, b_hi / const.beta_real)
        outer_ok &= b_hi <= const.beta_real
    G = F.gram()
    Ginv = inverse(G)
    primes_ok = True
    for p, a in const.alpha_primes.items():
        v = Place.prime(p)
        primes_ok &= all(abs_at_place(x, v) * a <= 1 for row in G for x in row)
    for p, b in const.beta_primes.items():
        v = Place.prime(p)
        primes_ok &= all(abs_at_place(x, v) <= b for row in Ginv for x in row)
    return SandwichCheck(const, inner_ok, outer_ok, primes_ok, inner_ext, outer_ext,
                         len(directions))
