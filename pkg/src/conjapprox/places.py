"""Places of Q and their normalized absolute values.

For Q every local degree is 1, so |p|_p = 1/p and the real place is the
usual absolute value.  The ``Place`` record still carries the local and
global degrees so signatures do not change if number fields are added.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint, isprime

from .errors import ConfigError, DegenerateInput


@dataclass(frozen=True)
class Place:
    kind: str  # "real" or "prime"
    p: int = None
    local_degree: int = 1
    global_degree: int = 1

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not isprime(self.p):
                raise ConfigError("prime place needs a prime, got %r" % (self.p,))
        elif self.kind != "real":
            raise ConfigError("unknown place kind %r" % self.kind)

    @classmethod
    def real(cls):
        return cls("real")

    @classmethod
    def prime(cls, p):
        return cls("prime", int(p))

    @property
    def is_archimedean(self):
        return self.kind == "real"

    def __str__(self):
        return "inf" if self.kind == "real" else "p=%d" % self.p


REAL = Place.real()


def valuation(a, p):
    """ord_p(a) for nonzero rational a."""
    a = Fraction(a)
    if a == 0:
        raise DegenerateInput("valuation of zero is infinite")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def abs_at_place(a, v):
    """Normalized |a|_v (exact Fraction); |0|_v = 0."""
    a = Fraction(a)
    if a == 0:
        return Fraction(0)
    if v.is_archimedean:
        return abs(a)
    return Fraction(v.p) ** (-valuation(a, v.p))


def support(a):
    """Primes dividing numerator or denominator of a."""
    a = Fraction(a)
    primes = set(factorint(abs(a.numerator))) | set(factorint(a.denominator))
    primes.discard(1)
    return sorted(primes)


def places_of(values):
    """Real place plus every prime appearing in any of ``values``."""
    primes = set()
    for x in values:
        if Fraction(x) != 0:
            primes.update(support(x))
    return [REAL] + [Place.prime(p) for p in sorted(primes)]


def product_over_places(a):
    """prod_v |a|_v over the real place and the primes in the support of a."""
    a = Fraction(a)
    if a == 0:
        raise DegenerateInput("product formula needs a nonzero rational")
    out = Fraction(1)
    for v in places_of([a]):
        out *= abs_at_place(a, v)
    return out


def vector_norm_at_place(x, v):
    """max_i |x_i|_v."""
    return max((abs_at_place(c, v) for c in x), default=Fraction(0))
