"""Irreducible polynomials with clustered real roots, and conjugate approximants.

The construction picks a real polynomial

    P_w(T) = a * prod_i prod_{j=1..m_i} (T - eta_i - j z_i)

whose roots sit just beside each target, then asks the lattice for an
integer polynomial P close to P_w in the body C(X, Y) and congruent to
T^n + p modulo p^2.  The congruence makes P Eisenstein at p, hence
irreducible.  Root counts near each target are certified with Sturm
sequences.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import log

from .bodies import BodySpec, construct_member, is_eisenstein, successive_minima
from .errors import ConfigError, DegenerateInput, InfeasibleError, PrecisionExhausted
from .heights import height_polynomial, is_irreducible
from .intervals import DEFAULT_BITS, MAX_BITS, IntervalReal, PointSpec, round_dyadic
from .places import REAL, Place
from .poly import Poly, count_real_roots, isolate_real_roots, refine_root, sturm_sequence

CASES = ("thm1", "thm2")
MAX_DOUBLINGS = 80


# -- exponent bookkeeping -------------------------------------------------

@dataclass(frozen=True)
class ExponentLedger:
    n: int
    t: int
    s: int
    m: int
    D: int
    d: int
    case: str
    nu: int
    target_exponent: Fraction
    y_exponent: Fraction
    profile: tuple = ()
    assumptions: tuple = ()

    def Y_of(self, X):
        """Y = X^((n+2-nu)/nu), rounded down to a dyadic rational."""
        X = Fraction(X)
        if X < 1:
            raise ConfigError("X must be at least 1")
        value = float(X) ** float(self.y_exponent)
        Y = round_dyadic(Fraction(value), 64, up=False)
        return max(Y, Fraction(1))

    def to_json(self):
        return {
            "n": self.n, "t": self.t, "s": self.s, "m": self.m, "D": self.D, "d": self.d,
            "case": self.case, "nu": self.nu,
            "target_exponent": str(self.target_exponent),
            "y_exponent": str(self.y_exponent),
            "points": [[p.to_text(), k] for p, k in self.profile],
            "assumptions": list(self.assumptions),
        }


def _profile(points):
    """Collapse a point list (or (point, multiplicity) pairs) to distinct points."""
    out = []
    for item in points:
        p, k = item if isinstance(item, tuple) else (item, 1)
        for i, (q, kq) in enumerate(out):
            if q == p:
                out[i] = (q, kq + k)
                break
        else:
            out.append((p, k))
    return tuple(out)


def exponent_ledger(n, t, points, D=1, case="thm1", d=1):
    """Exponent bookkeeping for one of the two approximation theorems.

    ``points`` lists xi_1..xi_t (repeats allowed) or (point, multiplicity)
    pairs.  thm1 uses nu = 4Dst, thm2 uses nu = 4t.
    """
    if case not in CASES:
        raise ConfigError("case must be thm1 or thm2")
    profile = _profile(points)
    if sum(k for _, k in profile) != t:
        raise ConfigError("multiplicities add up to %d, expected t = %d"
                          % (sum(k for _, k in profile), t))
    s = len(profile)
    m = max(k for _, k in profile)
    if case == "thm1":
        nu = 4 * D * s * t
        target = Fraction(n, 4 * d * D * m * s * t)
    else:
        if m != 1:
            raise ConfigError("thm2 needs distinct points")
        nu = 4 * t
        target = Fraction(n, 4 * d * t)
    if n < nu:
        raise ConfigError("need n >= nu = %d, got n = %d" % (nu, n))
    need = Fraction(n, D * t) if case == "thm1" else Fraction(n, t)
    notes = []
    for p, _ in profile:
        deg = p.degree()
        if deg is None:
            notes.append("degree of %s over Q assumed >= %s" % (p.to_text(), need))
        elif deg < need:
            raise ConfigError("degree of %s is %d, below the required %s"
                              % (p.to_text(), deg, need))
    return ExponentLedger(n, t, s, m, D, d, case, nu, target,
                          Fraction(n + 2 - nu, nu), profile, tuple(notes))


# -- engineered target ----------------------------------------------------

def target_centers(points, bits=DEFAULT_BITS):
    """Dyadic midpoints of the point enclosures."""
    return [round_dyadic(p.enclosure(bits).mid, bits, up=False) for p in points]


def engineered_target(spec, a, zs, centers=None):
    """a * prod_i prod_{j<=m_i} (T - eta_i - j z_i) with rational centers eta_i."""
    a = Fraction(a)
    zs = [Fraction(z) for z in zs]
    if a == 0 or any(z == 0 for z in zs):
        raise ConfigError("a and every z_i must be nonzero")
    if len(zs) != len(spec.points):
        raise ConfigError("one z per target point is required")
    if centers is None:
        centers = target_centers(spec.points, spec.bits)
    P = Poly([a])
    for eta, m, z in zip(centers, spec.multiplicities, zs):
        for j in range(1, m + 1):
            P = P * Poly([-(eta + j * z), 1])
    return P


# -- root clusters ----------------------------------------------------------

@dataclass
class Cluster:
    count: int
    roots: list               # (a, b] rational enclosures, disjoint, increasing
    window: tuple             # interval certainly inside the disk
    nonvanishing: bool


def point_nonvanishing(P, x, bits=DEFAULT_BITS):
    """Decide P(x) != 0 exactly for rational or algebraic x, by intervals otherwise."""
    if not P:
        return False
    if x.kind == "rational":
        return P(x.exact_value()) != 0
    if x.kind == "algebraic":
        # x = mul * r + add with r a root of min_poly
        Q = P.shift(x.add).scale(x.mul)
        return bool(Q % x.min_poly)
    while bits <= MAX_BITS:
        v = P(x.enclosure(bits))
        if not isinstance(v, IntervalReal):
            return v != 0
        if not v.contains_zero():
            return True
        bits *= 2
    raise PrecisionExhausted("cannot separate P(%s) from 0" % x.to_text())


def cluster_roots(P, eta, m, radius, width=None, bits=DEFAULT_BITS):
    """Real roots of P certainly within ``radius`` of ``eta``.

    The count is exact over the interval [hi(eta) - r, lo(eta) + r], which
    lies inside the disk whatever the true eta.  ``width`` refines the
    returned enclosures.
    """
    if not isinstance(P, Poly):
        P = Poly(P)
    if not P:
        raise DegenerateInput("the zero polynomial has no isolated roots")
    radius = Fraction(radius)
    if radius <= 0:
        raise ConfigError("radius must be positive")
    while True:
        enc = eta.enclosure(bits)
        lo, hi = enc.upper - radius, enc.lower + radius
        if lo < hi or bits >= MAX_BITS:
            break
        bits *= 2
    if lo >= hi:
        raise PrecisionExhausted("point enclosure wider than the disk")
    count = count_real_roots(P, lo, hi) + (1 if P(lo) == 0 else 0) if P.degree > 0 else 0
    roots = []
    if count:
        roots = isolate_real_roots(P, lo - Fraction(0), hi, width)
        if P(lo) == 0:
            roots.insert(0, (lo, lo))
    return Cluster(count, roots, (lo, hi), point_nonvanishing(P, eta, bits))


def offset_windows(P, eta, m, z, bits=DEFAULT_BITS):
    """Root counts of P within z/4 of each engineered root eta + j z (j = 1..m).

    The windows use the inner bound of the eta enclosure, so a positive
    count certifies a root there for the true eta.
    """
    enc = eta.enclosure(bits)
    q = abs(Fraction(z)) / 4
    counts = []
    seq = sturm_sequence(P)
    for j in range(1, m + 1):
        lo = enc.upper + j * z - q
        hi = enc.lower + j * z + q
        counts.append(count_real_roots(P, lo, hi, seq) if lo < hi else 0)
    return counts


# -- the pipeline -----------------------------------------------------------

@dataclass
class ApproxResult:
    X: Fraction
    Y: Fraction
    P: Poly
    eisenstein_prime: int
    irreducible: bool
    clusters: list
    conjugates: list          # IntervalReal per target, in target order
    distances: list           # IntervalReal |xi_i - alpha_i|
    height: int
    measured_exponent: IntervalReal
    a: Fraction
    zs: list
    attempts: int
    lambda_hi: Fraction
    budget: Fraction
    ledger: ExponentLedger = None
    certificates: dict = field(default_factory=dict)

    def to_json(self, digits=40):
        return {
            "X": str(self.X), "Y": str(self.Y),
            "P": [str(c) for c in self.P.integer_coefficients()],
            "degree": self.P.degree,
            "eisenstein_prime": self.eisenstein_prime,
            "irreducible": self.irreducible,
            "height": str(self.height),
            "a": str(self.a), "z": [str(z) for z in self.zs],
            "attempts": self.attempts,
            "lambda_hi": str(self.lambda_hi),
            "budget": str(self.budget),
            "clusters": [{"count": c.count,
                          "window": [str(c.window[0]), str(c.window[1])],
                          "roots": [[str(u), str(v)] for u, v in c.roots],
                          "nonvanishing": c.nonvanishing} for c in self.clusters],
            "conjugates": [a.to_json(digits) for a in self.conjugates],
            "distances": [x.to_json(digits) for x in self.distances],
            "measured_exponent": self.measured_exponent.to_json(digits),
            "certificates": self.certificates,
        }


def nominal_offsets(X, Y, multiplicities):
    """Largest powers of two z_i with z_i <= (XY)^(-1/m_i)."""
    XY = Fraction(X) * Fraction(Y)
    out = []
    for m in multiplicities:
        k = 0
        while Fraction(2) ** (k * m) < XY:
            k += 1
        out.append(Fraction(1, 2 ** k))
    return out


def _separation(points, bits):
    encs = [p.enclosure(bits) for p in points]
    sep = None
    for i in range(len(encs)):
        for j in range(i + 1, len(encs)):
            gap = abs(encs[i] - encs[j]).lower
            sep = gap if sep is None else min(sep, gap)
    return sep


def check_disjoint(spec, zs):
    """Radii (m_i + 1) z_i must stay below half of min(1, separation)."""
    sep = _separation(spec.points, spec.bits)
    cap = Fraction(1, 2) * (Fraction(1) if sep is None else min(Fraction(1), sep))
    radii = [(m + 1) * z for m, z in zip(spec.multiplicities, zs)]
    worst = max(radii)
    if worst >= cap:
        raise InfeasibleError(
            "cluster disks of radius %s are not disjoint (limit %s); increase X"
            % (float(worst), float(cap)),
            stage="disjointness", details={"radius": str(worst), "limit": str(cap)})
    return radii


def _log_interval(x, bits=64):
    """Enclosure of log(x) for a positive IntervalReal or rational x."""
    x = x if isinstance(x, IntervalReal) else IntervalReal.point(Fraction(x), bits)
    if x.lower <= 0:
        raise DegenerateInput("log of a nonpositive quantity")
    lo, hi = log(float(x.lower)), log(float(x.upper))
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    return IntervalReal.make(Fraction(lo - slack), Fraction(hi + slack), bits)


def measured_exponent(distances, height):
    """min_i log(1/|xi_i - alpha_i|) / log H(alpha) as an enclosure."""
    if height <= 1:
        raise DegenerateInput("height must exceed 1")
    lh = _log_interval(Fraction(height))
    vals = [(-_log_interval(d)) / lh for d in distances]
    return IntervalReal.make(min(v.lower for v in vals), min(v.upper for v in vals), 64)


def approximate_conjugates(ledger, X, prime=2, report=None, bits=DEFAULT_BITS):
    """Run the full construction for one X and certify the result."""
    X = Fraction(X)
    Y = ledger.Y_of(X)
    points = [p for p, _ in ledger.profile]
    mults = [k for _, k in ledger.profile]
    spec = BodySpec(ledger.n, points, mults, X, Y, bits=bits)
    zs = nominal_offsets(X, Y, mults)
    radii = check_disjoint(spec, zs)
    place = Place.prime(prime)

    if report is None:
        try:
            report = successive_minima(spec, "reduced")
        except InfeasibleError as exc:
            exc.stage = exc.stage or "minima"
            raise
    lam = report.hi[-1]
    d = spec.dim
    budget = Fraction(d * prime ** 2, 2) * lam
    centers = target_centers(points, bits)
    eisenstein_target = Poly.monomial(ledger.n) + prime

    a = Fraction(1)
    while a < lam * X:
        a *= 2
    for attempt in range(1, MAX_DOUBLINGS + 1):
        Pw = engineered_target(spec, a, zs, centers)
        member = construct_member(
            spec, [(REAL, Pw, budget), (place, eisenstein_target, 2)], report)
        P = member.P
        if P.degree == ledger.n and is_eisenstein(P, prime) and all(
                all(offset_windows(P, eta, m, z, bits))
                for eta, m, z in zip(points, mults, zs)):
            clusters = [cluster_roots(P, eta, m, r, bits=bits)
                        for eta, m, r in zip(points, mults, radii)]
            if all(c.count >= m and c.nonvanishing for c, m in zip(clusters, mults)):
                break
        a *= 2
    else:
        raise InfeasibleError("clustering not certified after %d doublings of a"
                              % MAX_DOUBLINGS, stage="cluster")

    conjugates, distances = [], []
    for eta, c, r in zip(points, clusters, radii):
        alpha, dist = _matched_conjugate(P, eta, c, bits)
        conjugates.append(alpha)
        distances.append(dist)
    height = int(height_polynomial(P.primitive_part()))
    irreducible = is_irreducible(P)
    certificates = {
        "eisenstein": is_eisenstein(P, prime),
        "irreducible_factorization": irreducible,
        "disjoint": _pairwise_disjoint(conjugates),
        "nonvanishing": all(c.nonvanishing for c in clusters),
        "member_scale": str(member.real_scale),
        "height_le_norm": height <= P.norm_inf(),
    }
    return ApproxResult(X, Y, P, prime, irreducible, clusters, conjugates, distances,
                        height, measured_exponent(distances, height), a, zs, attempt,
                        lam, budget, ledger, certificates)


def _matched_conjugate(P, eta, cluster, bits):
    """Root enclosure nearest eta, refined until its distance to eta is certified."""
    enc = eta.enclosure(bits)
    best = min(cluster.roots, key=lambda ab: abs((ab[0] + ab[1]) / 2 - enc.mid))
    a, b = best
    q = P
    width = (b - a) or Fraction(1)
    seq_q = sturm_sequence(q)
    while True:
        alpha = IntervalReal.make(a, b, bits)
        dist = abs(enc - alpha)
        if dist.lower > 0 and dist.upper <= dist.lower * (1 + Fraction(1, 2 ** 40)):
            return alpha, dist
        if a == b:
            # rational root: distance limited only by the point enclosure
            if dist.lower > 0 or bits >= MAX_BITS:
                return alpha, dist
            bits *= 2
            enc = eta.enclosure(bits)
            continue
        width = (b - a) / 2 ** 32
        a, b = refine_root(q, a, b, width)
        if (b - a) < enc.width and bits < MAX_BITS:
            bits *= 2
            enc = eta.enclosure(bits)
        assert count_real_roots(q, a, b, seq_q) == 1 or a == b


def _pairwise_disjoint(intervals):
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            if intervals[i].overlaps(intervals[j]):
                return False
    return True


def approximation_grid(ledger, start, factor, count, prime=2):
    """Results for X = start * factor^k, k < count."""
    out = []
    X = Fraction(start)
    for _ in range(count):
        out.append(approximate_conjugates(ledger, X, prime))
        X *= Fraction(factor)
    return out
