"""Search for integer polynomials that are simultaneously small on a progression.

Given xi_1, ..., xi_(n+1) in arithmetic or geometric progression, a
degree-n integer polynomial Q with

    ||Q|| <= Y   and   |Q(xi_i)| <= Y^-e   (t < i <= n+1)

is a nonzero lattice point of a symmetric convex body, so its existence is
decided by the first minimum of that body.  The box principle supplies Q
once e is below t/(n+1-t) and Y is large enough; the transcendence
criterion rules Q out (for all large Y) at e = 4t/(n+1-4t) unless the
points are algebraic of low degree.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import integer_nthroot

from .bodies import BodySpec, dual_minima
from .errors import ConfigError, PrecisionExhausted
from .geometry import Sandwich, first_minimum
from .intervals import (DEFAULT_BITS, MAX_BITS, IntervalReal, PointSpec, eval_poly_at_point,
                        round_dyadic)
from .invariant_form import ProgressionCase
from .poly import Poly

FOUND = "certified-found"
ABSENT = "certified-absent"
NO_FIND = "reduction-no-find"


@dataclass(frozen=True)
class ProgressionPoints:
    case: ProgressionCase
    seed: PointSpec
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError("a progression needs at least two points")
        self.case.check_degree(self.count - 1)

    @property
    def points(self):
        g = self.case.gamma
        if self.case.is_additive:
            return [self.seed.affine(add=i * g) for i in range(self.count)]
        if self.seed.is_rational and self.seed.exact_value() == 0:
            raise ConfigError("a geometric progression needs a nonzero seed")
        return [self.seed.affine(mul=g ** i) for i in range(self.count)]

    def to_json(self):
        return {"case": self.case.tag, "gamma": str(self.case.gamma),
                "seed": self.seed.to_text(), "count": self.count}


def dirichlet_exponent(n, t):
    return Fraction(t, n + 1 - t)


def theorem_exponent(n, t):
    if n + 1 - 4 * t <= 0:
        raise ConfigError("the criterion exponent needs n >= 4t")
    return Fraction(4 * t, n + 1 - 4 * t)


def rational_power(Y, e, bits=DEFAULT_BITS):
    """Enclosure of Y^e for rational Y > 0 and rational e >= 0."""
    Y, e = Fraction(Y), Fraction(e)
    if Y <= 0:
        raise ConfigError("Y must be positive")
    p, q = e.numerator, e.denominator
    base = Y ** p
    scale = 1 << bits
    # floor((base * scale^q)^(1/q)) / scale
    num = base.numerator * scale ** q // base.denominator
    root, exact = integer_nthroot(num, q)
    lo = Fraction(root, scale)
    hi = lo if exact and num * base.denominator == base.numerator * scale ** q \
        else Fraction(root + 1, scale)
    return IntervalReal.make(lo, hi, bits)


def below_power(value_hi, Y, e):
    """True when value_hi <= Y^-e, decided exactly: value_hi^q * Y^p <= 1."""
    Y, e = Fraction(Y), Fraction(e)
    return Fraction(value_hi) ** e.denominator * Y ** e.numerator <= 1


@dataclass
class FeasibilityRecord:
    Y: Fraction
    exponent: Fraction
    certainty: str
    method: str
    Q: Poly = None
    lambda1: IntervalReal = None
    norm_ok: bool = None
    values: list = field(default_factory=list)      # IntervalReal |Q(xi_i)|
    values_ok: bool = None
    enumerated: int = 0

    @property
    def found(self):
        return self.certainty == FOUND

    def to_json(self, digits=40):
        out = {"Y": str(self.Y), "exponent": str(self.exponent),
               "certainty": self.certainty, "method": self.method,
               "enumerated": self.enumerated}
        if self.lambda1 is not None:
            out["lambda1"] = self.lambda1.to_json(digits)
        if self.Q is not None:
            out["Q"] = [str(c) for c in self.Q.coeffs]
            out["norm_ok"] = self.norm_ok
            out["values_ok"] = self.values_ok
            out["values"] = [v.to_json(digits) for v in self.values]
        return out


def small_value_body(points, n, t, Y, e, bits=DEFAULT_BITS):
    """Sandwich for {||Q|| <= Y, |Q(xi_i)| <= Y^-e (i > t)}."""
    Y = Fraction(Y)
    weight = rational_power(Y, e, bits + 32)
    # rows reach Y * Y^e * |xi|^n in size; relative precision must cover that
    top = max((abs(x.enclosure(64)).upper for x in points[t:]), default=Fraction(1))
    size = Y * weight.upper * max(Fraction(1), top) ** n
    extra = size.numerator.bit_length() - size.denominator.bit_length() + 8
    work = bits + extra
    while True:
        exact = [[Fraction(int(i == j)) / Y for j in range(n + 1)] for i in range(n + 1)]
        w = rational_power(Y, e, work + 32)
        rows = []
        for x in points[t:]:
            v = x.exact_value() if x.is_rational else x.enclosure(work + 32)
            rows.append([v ** k * w for k in range(n + 1)])
        try:
            return Sandwich.from_rows(exact, rows, coef_bound=Y, bits=96 + extra)
        except PrecisionExhausted:
            if work >= MAX_BITS:
                raise
            work *= 2


def certify_small_values(Q, points, t, Y, e, bits=DEFAULT_BITS):
    """(norm_ok, values, values_ok) for a candidate Q, escalating precision."""
    norm_ok = Q.norm_inf() <= Fraction(Y)
    while True:
        values = [abs(eval_poly_at_point(Q, x, bits)) for x in points[t:]]
        if all(below_power(v.upper, Y, e) for v in values):
            return norm_ok, values, True
        if any(not below_power(v.lower, Y, e) for v in values):
            return norm_ok, values, False
        if bits >= MAX_BITS:
            raise PrecisionExhausted("cannot decide |Q(xi)| <= Y^-e")
        bits *= 2


def criterion_search(progression, n, t, Y, exponent, method="auto", max_points=400_000,
                     bits=DEFAULT_BITS):
    """Look for Q with ||Q|| <= Y and |Q(xi_i)| <= Y^-e for t < i <= n+1."""
    if n < 4 * t:
        raise ConfigError("need n >= 4t")
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ConfigError("exponent must be nonnegative")
    points = progression.points if isinstance(progression, ProgressionPoints) else list(progression)
    if len(points) != n + 1:
        raise ConfigError("need n + 1 = %d points" % (n + 1))
    if method == "auto":
        method = "exhaustive" if n <= 6 else "reduced"
    if method not in ("exhaustive", "reduced"):
        raise ConfigError("method must be exhaustive, reduced or auto")
    Y = Fraction(Y)
    body = small_value_body(points, n, t, Y, exponent, bits)
    ident = [[int(i == j) for j in range(n + 1)] for i in range(n + 1)]
    lam, vec, count = first_minimum(body, ident, max_points, method == "exhaustive", bits)
    Q = Poly(vec).primitive_part()
    if lam.upper <= 1:
        norm_ok, values, ok = certify_small_values(Q, points, t, Y, exponent, bits)
        # re-verify at doubled precision
        norm2, _, ok2 = certify_small_values(Q, points, t, Y, exponent, 2 * bits)
        if norm_ok and ok and norm2 and ok2:
            return FeasibilityRecord(Y, exponent, FOUND, method, Q, lam, norm_ok, values,
                                     ok, count)
    certainty = ABSENT if (method == "exhaustive" and lam.lower > 1) else NO_FIND
    return FeasibilityRecord(Y, exponent, certainty, method, None, lam, enumerated=count)


def dirichlet_witness(progression, n, t, Y, delta=Fraction(1, 10), **kw):
    """criterion_search at the box-principle exponent scaled by (1 - delta)."""
    delta = Fraction(delta)
    if not 0 <= delta < 1:
        raise ConfigError("delta must lie in [0, 1)")
    return criterion_search(progression, n, t, Y, dirichlet_exponent(n, t) * (1 - delta), **kw)


def search_grid(progression, n, t, Y_values, exponent, **kw):
    return [criterion_search(progression, n, t, Y, exponent, **kw) for Y in Y_values]


@dataclass
class PhiScanPoint:
    X: Fraction
    Y: Fraction
    lambda1: IntervalReal
    witness: list

    def to_json(self, digits=40):
        return {"X": str(self.X), "Y": str(self.Y), "lambda1": self.lambda1.to_json(digits),
                "witness": [str(c) for c in self.witness]}


def phi_minimum_scan(points, n, nu, X_values, method="auto", multiplicities=None):
    """First minimum of the dual body at Y = X^((n+2-nu)/nu) along an X grid."""
    if method == "auto":
        method = "exhaustive" if n <= 6 else "reduced"
    out = []
    y_exp = Fraction(n + 2 - nu, nu)
    for X in X_values:
        X = Fraction(X)
        Y = max(Fraction(1), round_dyadic(Fraction(float(X) ** float(y_exp)), 64, up=False))
        spec = BodySpec(n, points, multiplicities or (), X, Y)
        rep = dual_minima(spec, method=method)
        out.append(PhiScanPoint(X, Y, rep.lambdas[0], rep.witnesses[0]))
    return out
