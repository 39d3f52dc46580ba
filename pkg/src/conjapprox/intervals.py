"""Outward-rounded real intervals with dyadic endpoints, and target points.

An ``IntervalReal`` stores exact Fractions whose denominators are powers of
two.  Every arithmetic step computes the exact rational result and then
rounds the lower end down and the upper end up to ``precision_bits``
significant bits, so an interval always encloses the true value.

``PointSpec`` describes a real number the library works with: a rational,
a real algebraic number given by its minimal polynomial and the index of the
root, or a named constant (ln 2, e, pi).  Affine images ``a*x + b`` of any
of these are allowed so progressions can be built from a seed.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .errors import ConfigError, PrecisionExhausted
from .poly import Poly, isolate_real_roots, refine_root, square_free_part

DEFAULT_BITS = 256
MAX_BITS = 1 << 15


def _floor_log2(q):
    """floor(log2(|q|)) for a nonzero Fraction."""
    q = abs(q)
    e = q.numerator.bit_length() - q.denominator.bit_length()
    # 2^e <= q < 2^(e+2) after this; correct by one step
    if Fraction(2) ** e > q:
        e -= 1
    elif Fraction(2) ** (e + 1) <= q:
        e += 1
    return e


def round_dyadic(q, bits, up):
    """Round q to a dyadic rational with ``bits`` significant bits."""
    q = Fraction(q)
    if q == 0:
        return q
    if q.denominator & (q.denominator - 1) == 0:
        # already dyadic; only round if it carries too many bits
        num = abs(q.numerator)
        if num.bit_length() <= bits:
            return q
    shift = bits - 1 - _floor_log2(q)
    if shift >= 0:
        scaled = q * (1 << shift)
        n = scaled.__ceil__() if up else scaled.__floor__()
        return Fraction(n, 1 << shift)
    scaled = q / (1 << -shift)
    n = scaled.__ceil__() if up else scaled.__floor__()
    return Fraction(n * (1 << -shift))


@dataclass(frozen=True)
class IntervalReal:
    """Closed interval [lower, upper] with dyadic endpoints."""

    lower: Fraction
    upper: Fraction
    precision_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval [%s, %s]" % (self.lower, self.upper))

    @classmethod
    def make(cls, lo, hi, bits=DEFAULT_BITS):
        return cls(round_dyadic(lo, bits, up=False), round_dyadic(hi, bits, up=True), bits)

    @classmethod
    def point(cls, q, bits=DEFAULT_BITS):
        return cls.make(q, q, bits)

    def _lift(self, other):
        if isinstance(other, IntervalReal):
            return other
        return IntervalReal.point(Fraction(other), self.precision_bits)

    @property
    def bits(self):
        return self.precision_bits

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        b = min(self.bits, o.bits)
        return IntervalReal.make(self.lower + o.lower, self.upper + o.upper, b)

    __radd__ = __add__

    def __neg__(self):
        return IntervalReal(-self.upper, -self.lower, self.bits)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, IntervalReal):
            c = Fraction(other)
            lo, hi = sorted((self.lower * c, self.upper * c))
            return IntervalReal.make(lo, hi, self.bits)
        o = other
        prods = (self.lower * o.lower, self.lower * o.upper,
                 self.upper * o.lower, self.upper * o.upper)
        return IntervalReal.make(min(prods), max(prods), min(self.bits, o.bits))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lower <= 0 <= self.upper:
            raise PrecisionExhausted("division by an interval containing zero")
        return IntervalReal.make(1 / self.upper, 1 / self.lower, self.bits)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k):
        if k == 0:
            return IntervalReal.point(1, self.bits)
        if k % 2 == 1 or self.lower >= 0:
            lo, hi = self.lower ** k, self.upper ** k
            if lo > hi:
                lo, hi = hi, lo
            return IntervalReal.make(lo, hi, self.bits)
        if self.upper <= 0:
            return IntervalReal.make(self.upper ** k, self.lower ** k, self.bits)
        return IntervalReal.make(0, max(self.lower ** k, self.upper ** k), self.bits)

    def __abs__(self):
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return IntervalReal(Fraction(0), max(-self.lower, self.upper), self.bits)

    # queries ------------------------------------------------------------
    @property
    def width(self):
        return self.upper - self.lower

    @property
    def mid(self):
        return (self.lower + self.upper) / 2

    @property
    def radius(self):
        return self.width / 2

    @property
    def mag(self):
        """max |x| over the interval."""
        return max(abs(self.lower), abs(self.upper))

    @property
    def mig(self):
        """min |x| over the interval."""
        if self.lower <= 0 <= self.upper:
            return Fraction(0)
        return min(abs(self.lower), abs(self.upper))

    def contains(self, q):
        if isinstance(q, IntervalReal):
            return self.lower <= q.lower and q.upper <= self.upper
        return self.lower <= Fraction(q) <= self.upper

    def __contains__(self, q):
        return self.contains(q)

    def contains_zero(self):
        return self.lower <= 0 <= self.upper

    def certainly_lt(self, other):
        return self.upper < self._lift(other).lower

    def certainly_le(self, other):
        return self.upper <= self._lift(other).lower

    def certainly_gt(self, other):
        return self.lower > self._lift(other).upper

    def overlaps(self, other):
        return not (self.upper < other.lower or other.upper < self.lower)

    def meets_width_contract(self):
        return self.width <= Fraction(2) ** (1 - self.bits) * max(Fraction(1), abs(self.lower))

    def hull(self, other):
        return IntervalReal(min(self.lower, other.lower), max(self.upper, other.upper),
                            min(self.bits, other.bits))

    def with_bits(self, bits):
        return IntervalReal.make(self.lower, self.upper, bits)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return "IntervalReal(%.17g, %.17g, bits=%d)" % (float(self.lower), float(self.upper), self.bits)

    def to_json(self, digits=40):
        """Decimal rendering rounded outward (still an enclosure)."""
        return {"lo": decimal_string(self.lower, digits, up=False),
                "hi": decimal_string(self.upper, digits, up=True),
                "bits": self.bits}


def decimal_string(q, digits, up):
    """Scientific-notation string of q rounded outward to ``digits`` digits."""
    q = Fraction(q)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    a = abs(q)
    e = len(str(a.numerator)) - len(str(a.denominator))
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    scaled = a / Fraction(10) ** (e - digits + 1)
    # outward: away from zero for the upper end of positives, etc.
    away = up == (q > 0)
    n = scaled.__ceil__() if away else scaled.__floor__()
    s = str(n)
    if len(s) > digits:  # carry from rounding up
        e += 1
        s = s[:digits]
    return "%s%s.%se%d" % (sign, s[0], s[1:] or "0", e)


def interval_from_json(d):
    return IntervalReal(Fraction(d["lo"]), Fraction(d["hi"]), int(d["bits"]))


# -- named constants ------------------------------------------------------

def _mpf_tuple_to_fraction(t):
    sign, man, exp, _ = t
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _iv_enclosure(value, bits):
    lo = _mpf_tuple_to_fraction(value._mpi_[0])
    hi = _mpf_tuple_to_fraction(value._mpi_[1])
    return IntervalReal.make(lo, hi, bits)


_CONSTANTS = {
    "ln2": lambda: iv.log(2),
    "e": lambda: iv.e,
    "pi": lambda: iv.pi,
    "sqrt2": lambda: iv.sqrt(2),
}


@lru_cache(maxsize=256)
def named_constant(name, bits=DEFAULT_BITS):
    """Certified enclosure of a named constant (mpmath interval context)."""
    if name not in _CONSTANTS:
        raise ConfigError("unknown named constant %r (known: %s)"
                          % (name, ", ".join(sorted(_CONSTANTS))))
    old = iv.prec
    try:
        iv.prec = bits + 16
        value = _CONSTANTS[name]()
        return _iv_enclosure(value, bits)
    except Exception as exc:  # evaluator failure must surface explicitly
        raise PrecisionExhausted("evaluator for %s failed: %s" % (name, exc)) from exc
    finally:
        iv.prec = old


# -- points ---------------------------------------------------------------

@dataclass(frozen=True)
class PointSpec:
    """A real target point.

    kind is one of ``"rational"``, ``"algebraic"``, ``"named"``; ``mul`` and
    ``add`` apply the affine map x -> mul * x + add afterwards.
    """

    kind: str
    value: Fraction = None
    min_poly: Poly = None
    root_index: int = None
    name: str = None
    mul: Fraction = Fraction(1)
    add: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("rational", "algebraic", "named"):
            raise ConfigError("unknown point kind %r" % self.kind)
        if self.mul == 0:
            raise ConfigError("affine multiplier must be nonzero")
        if self.kind == "algebraic":
            from .heights import is_irreducible  # local import avoids a cycle

            if self.min_poly is None or self.min_poly.degree < 1:
                raise ConfigError("algebraic point needs a minimal polynomial")
            if not is_irreducible(self.min_poly):
                raise ConfigError("polynomial %s is reducible over Q" % self.min_poly)
            roots = isolate_real_roots(self.min_poly)
            if not 0 <= self.root_index < len(roots):
                raise ConfigError("polynomial %s has %d real roots, index %d requested"
                                  % (self.min_poly, len(roots), self.root_index))
        if self.kind == "named":
            named_constant(self.name, 64)

    # constructors -------------------------------------------------------
    @classmethod
    def rational(cls, q):
        return cls("rational", value=Fraction(q))

    @classmethod
    def algebraic(cls, coeffs, index):
        return cls("algebraic", min_poly=Poly(coeffs), root_index=index)

    @classmethod
    def named(cls, name):
        return cls("named", name=name)

    def affine(self, mul=1, add=0):
        """The point mul * self + add."""
        mul, add = Fraction(mul), Fraction(add)
        if self.kind == "rational":
            return PointSpec.rational(mul * self.exact_value() + add)
        return PointSpec(self.kind, self.value, self.min_poly, self.root_index, self.name,
                         self.mul * mul, self.add * mul + add)

    # evaluation ---------------------------------------------------------
    @property
    def is_rational(self):
        return self.kind == "rational"

    def exact_value(self):
        if self.kind != "rational":
            raise ValueError("point %s is not rational" % self.to_text())
        return self.value * self.mul + self.add

    def enclosure(self, bits=DEFAULT_BITS):
        return _point_enclosure(self, bits)

    def degree(self):
        """Degree over Q when known, None for named constants."""
        if self.kind == "rational":
            return 1
        if self.kind == "algebraic":
            return self.min_poly.degree
        return None

    def to_text(self):
        if self.kind == "rational":
            return "rat:%s" % self.exact_value()
        if self.kind == "algebraic":
            base = "alg:[%s]@root%d" % (",".join(str(c) for c in self.min_poly.coeffs),
                                        self.root_index)
        else:
            base = "const:%s" % self.name
        if self.mul != 1:
            base += "*%s" % self.mul
        if self.add != 0:
            base += ("+%s" % self.add) if self.add > 0 else ("+%s" % self.add)
        return base

    def __str__(self):
        return self.to_text()


@lru_cache(maxsize=1024)
def _point_enclosure(p, bits):
    if p.kind == "rational":
        return IntervalReal.point(p.exact_value(), bits)
    if p.kind == "named":
        base = named_constant(p.name, bits)
    else:
        q = square_free_part(p.min_poly)
        a, b = isolate_real_roots(q)[p.root_index]
        a, b = refine_root(q, a, b, Fraction(1, 2 ** (bits + 2)))
        base = IntervalReal.make(a, b, bits)
    if p.mul == 1 and p.add == 0:
        return base
    return base * p.mul + p.add


_POINT_RE = re.compile(
    r"^(?P<base>rat:[-+]?\d+(?:/\d+)?|alg:\[[-+\d,\s]+\]@root\d+|const:[A-Za-z_][A-Za-z0-9_]*)"
    r"(?P<ops>(?:[*+][-+]?\d+(?:/\d+)?)*)$")
_OP_RE = re.compile(r"([*+])([-+]?\d+(?:/\d+)?)")


def parse_point(text):
    """Parse ``rat:3/2``, ``alg:[-2,0,1]@root0``, ``const:ln2`` (plus ``*q``/``+q``)."""
    text = text.strip()
    m = _POINT_RE.match(text)
    if not m:
        raise ConfigError("cannot parse point %r" % text)
    base = m.group("base")
    if base.startswith("rat:"):
        p = PointSpec.rational(Fraction(base[4:]))
    elif base.startswith("alg:"):
        coeffs_text, idx = base[4:].split("@root")
        coeffs = [int(c) for c in coeffs_text.strip("[]").split(",") if c.strip()]
        p = PointSpec.algebraic(coeffs, int(idx))
    else:
        p = PointSpec.named(base[6:])
    for op, val in _OP_RE.findall(m.group("ops")):
        p = p.affine(mul=Fraction(val)) if op == "*" else p.affine(add=Fraction(val))
    return p


def parse_points(text):
    return [parse_point(t) for t in text.split(",") if t.strip()] if "[" not in text else \
        _split_points_with_brackets(text)


def _split_points_with_brackets(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [parse_point(t) for t in parts]


def eval_poly_at_point(P, x, precision_bits=DEFAULT_BITS):
    """Enclosure of P(x) meeting the width contract for ``precision_bits``.

    The working precision is doubled until the result is narrow enough.
    """
    if precision_bits < 8:
        raise ConfigError("precision_bits must be at least 8")
    if not isinstance(P, Poly):
        P = Poly(P)
    if x.is_rational:
        return IntervalReal.point(P(x.exact_value()), precision_bits)
    work = precision_bits + 16
    while work <= MAX_BITS:
        val = P(x.enclosure(work)) if P.coeffs else IntervalReal.point(0, work)
        if not isinstance(val, IntervalReal):
            val = IntervalReal.point(val, work)
        out = val.with_bits(precision_bits)
        if out.meets_width_contract():
            return out
        work *= 2
    raise PrecisionExhausted("could not evaluate %s at %s to %d bits"
                             % (P, x.to_text(), precision_bits))
