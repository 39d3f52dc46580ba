"""Univariate polynomials with exact rational coefficients.

A single immutable ``Poly`` type carries both integer and rational
polynomials; ``is_integral`` tells them apart.  Coefficients are stored
constant term first, trailing zeros stripped (the zero polynomial has an
empty tuple).  Real-root counting and isolation use Sturm sequences with
exact rational endpoints.
"""

from fractions import Fraction
from math import comb, factorial, gcd, lcm


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots, lead=1):
        p = cls([lead])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    T = None  # set below

    # basic protocol -----------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Poly([%s])" % ", ".join(str(c) for c in self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else "T^%d" % k)
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = str(c) + ("*" + mono if mono else "")
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    def coefficient_list(self, length=None):
        """Coefficients padded with zeros to ``length`` (default degree+1)."""
        c = list(self.coeffs)
        if length is not None:
            if length < len(c):
                raise ValueError("polynomial degree exceeds requested length")
            c += [Fraction(0)] * (length - len(c))
        return c

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(x):
        return x if isinstance(x, Poly) else Poly([x])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coefficient_list(n)
        b = other.coefficient_list(n)
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            o = Fraction(other)
            return Poly([o * x for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        c = Fraction(c)
        return Poly([x / c for x in self.coeffs])

    def __divmod__(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(), self
        q = [Fraction(0)] * dq
        lead = other.leading
        for k in range(dq - 1, -1, -1):
            coef = r[k + other.degree] / lead
            q[k] = coef
            if coef:
                for j, b in enumerate(other.coeffs):
                    r[k + j] -= coef * b
        return Poly(q), Poly(r[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        """True when self divides other exactly over Q."""
        if not self.coeffs:
            return not other.coeffs
        return not (other % self).coeffs

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r.coeffs:
            raise ValueError("division is not exact")
        return q

    # evaluation ---------------------------------------------------------
    def __call__(self, x):
        """Horner evaluation; works for Fractions, ints, IntervalReal, Poly."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, Poly) else Poly()
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if isinstance(x, Poly) and not isinstance(acc, Poly):
            acc = Poly([acc])
        return acc

    def derivative(self, k=1):
        c = self.coeffs
        if k == 0:
            return self
        return Poly([c[j] * (factorial(j) // factorial(j - k)) for j in range(k, len(c))])

    def compose(self, inner):
        return self(inner)

    def shift(self, x):
        """P(x + T)."""
        x = Fraction(x)
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for j, c in enumerate(self.coeffs):
            if c:
                for i in range(j + 1):
                    out[i] += c * comb(j, i) * x ** (j - i)
        return Poly(out)

    def scale(self, x):
        """P(x T)."""
        x = Fraction(x)
        return Poly([c * x ** j for j, c in enumerate(self.coeffs)])

    # arithmetic structure ----------------------------------------------
    def content(self):
        """Positive rational c with self / c a primitive integer polynomial."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive_part(self):
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        p = self / self.content()
        return -p if p.leading < 0 else p

    def monic(self):
        return self / self.leading

    def integer_coefficients(self):
        if not self.is_integral:
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def norm_inf(self):
        return max((abs(c) for c in self.coeffs), default=Fraction(0))


Poly.T = Poly([0, 1])


def poly_gcd(a, b):
    """Monic gcd over Q (zero if both are zero)."""
    while b.coeffs:
        a, b = b, a % b
    return a.monic() if a.coeffs else a


def square_free_part(p):
    g = poly_gcd(p, p.derivative())
    return (p // g) if g.degree > 0 else p


# -- Sturm sequences ------------------------------------------------------

def sturm_sequence(p):
    seq = [p, p.derivative()]
    while seq[-1].coeffs and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if not r.coeffs:
            break
        # keep coefficient growth in check: rescale by a positive rational
        seq.append(r.primitive_part() * (1 if r.leading > 0 else -1) if r.coeffs else r)
    return [s for s in seq if s.coeffs]


def _sign(x):
    return (x > 0) - (x < 0)


def _variations(seq, x):
    signs = [_sign(s(x)) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _variations_inf(seq, positive=True):
    signs = []
    for s in seq:
        lc = _sign(s.leading)
        if not positive and s.degree % 2 == 1:
            lc = -lc
        signs.append(lc)
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_real_roots(p, a=None, b=None, seq=None):
    """Number of distinct real roots of p in the half-open interval (a, b].

    ``None`` endpoints mean -inf / +inf.
    """
    if not p.coeffs:
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    seq = seq or sturm_sequence(p)
    va = _variations_inf(seq, positive=False) if a is None else _variations(seq, Fraction(a))
    vb = _variations_inf(seq, positive=True) if b is None else _variations(seq, Fraction(b))
    return va - vb


def root_bound(p):
    """Cauchy bound: every complex root has modulus < the returned value."""
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p, lo=None, hi=None, width=None):
    """Disjoint rational intervals (a, b], each holding exactly one root.

    When ``width`` is given every interval is refined below that width.
    Intervals are returned in increasing order.
    """
    if p.degree <= 0:
        return []
    q = square_free_part(p)
    seq = sturm_sequence(q)
    B = root_bound(q)
    lo = -B if lo is None else Fraction(lo)
    hi = B if hi is None else Fraction(hi)
    out = []
    stack = [(lo, hi, count_real_roots(q, lo, hi, seq))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        k1 = count_real_roots(q, a, m, seq)
        stack.append((m, b, k - k1))
        stack.append((a, m, k1))
    out.sort()
    if width is not None:
        out = [refine_root(q, a, b, width) for a, b in out]
    return out


def refine_root(q, a, b, width):
    """Shrink an isolating interval (a, b] of a simple root of q by bisection."""
    a, b = Fraction(a), Fraction(b)
    width = Fraction(width)
    if q(b) == 0:
        return (b, b)
    sb = _sign(q(b))
    while b - a > width:
        m = (a + b) / 2
        # dyadic midpoint keeps denominators small
        vm = q(m)
        if vm == 0:
            return (m, m)
        if _sign(vm) == sb:
            b = m
        else:
            a = m
    return (a, b)
