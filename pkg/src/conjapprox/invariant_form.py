"""Translation-invariant upper-triangular bilinear forms on E_n.

The nodes are gamma_i = i*gamma (additive case) or gamma**i
(multiplicative case).  The unique relation sum_i a_i P(gamma_i) = 0 on
E_n with a_{n+1} = 1 determines the coefficient table

    g_ij = rho**(n - j) * a_{n+1+i-j},   0 <= i <= j <= n,

with rho = 1 (additive) or gamma**n (multiplicative).  The resulting form
g(P, Q) = sum_{i<=j} g_ij P(gamma_i) Q(gamma_j) is invariant under
translation, up to the factor x**n under dilation.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import ConfigError, DegenerateInput
from .linalg import det, solve, transpose
from .poly import Poly


@dataclass(frozen=True)
class ProgressionCase:
    tag: str  # "additive" or "multiplicative"
    gamma: Fraction

    def __post_init__(self):
        if self.tag not in ("additive", "multiplicative"):
            raise ConfigError("case must be additive or multiplicative, got %r" % self.tag)
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.gamma == 0:
            raise ConfigError("gamma must be nonzero (gamma != 0 is required)")

    @classmethod
    def additive(cls, gamma):
        return cls("additive", gamma)

    @classmethod
    def multiplicative(cls, gamma):
        return cls("multiplicative", gamma)

    @property
    def is_additive(self):
        return self.tag == "additive"

    def check_degree(self, n):
        """Multiplicative case needs gamma**i != 1 for i = 1..2n."""
        if not self.is_additive:
            g = Fraction(1)
            for i in range(1, 2 * n + 1):
                g *= self.gamma
                if g == 1:
                    raise DegenerateInput(
                        "gamma = %s has gamma^%d = 1; need gamma^i != 1 for i = 1..%d"
                        % (self.gamma, i, 2 * n))

    def node(self, i, base=None):
        """i-th node of the progression started at ``base`` (default gamma_0)."""
        if self.is_additive:
            return (Fraction(0) if base is None else base) + i * self.gamma
        return (Fraction(1) if base is None else base) * self.gamma ** i

    def nodes(self, count, base=None):
        return [self.node(i, base) for i in range(count)]

    def rho(self, n):
        return Fraction(1) if self.is_additive else self.gamma ** n


def relation_coefficients(n, case):
    """a_0..a_{n+1} with a_{n+1} = 1 and sum a_i P(gamma_i) = 0 on E_n."""
    case.check_degree(n)
    nodes = case.nodes(n + 2)
    # sum_{i<=n} a_i gamma_i^k = -gamma_{n+1}^k for k = 0..n
    A = [[nodes[i] ** k for i in range(n + 1)] for k in range(n + 1)]
    b = [-nodes[n + 1] ** k for k in range(n + 1)]
    return solve(A, b) + [Fraction(1)]


def relation_coefficients_lagrange(n, case):
    """Closed form a_i = -prod_{j != i} (gamma_{n+1} - gamma_j) / (gamma_i - gamma_j)."""
    case.check_degree(n)
    g = case.nodes(n + 2)
    out = []
    for i in range(n + 1):
        a = Fraction(-1)
        for j in range(n + 1):
            if j != i:
                a *= (g[n + 1] - g[j]) / (g[i] - g[j])
        out.append(a)
    return out + [Fraction(1)]


@dataclass(frozen=True)
class InvariantForm:
    n: int
    case: ProgressionCase
    relation: tuple
    rho: Fraction
    table: tuple  # table[i][j], zero below the diagonal
    scaled: tuple = field(init=False, repr=False, compare=False)  # (integer table, denominator)

    def __post_init__(self):
        den = lcm(*(c.denominator for row in self.table for c in row))
        ints = tuple(tuple(int(c * den) for c in row) for row in self.table)
        object.__setattr__(self, "scaled", (ints, den))

    def g(self, i, j):
        return self.table[i][j]

    def gram(self, base=None):
        """Matrix G with g(P, Q) = p^T G q in the monomial basis."""
        n = self.n
        nodes = self.case.nodes(n + 1, base)
        scale = self.base_factor(base)
        V = [[x ** k for k in range(n + 1)] for x in nodes]  # V[i][k] = node_i^k
        Vt = transpose(V)
        out = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for k in range(n + 1):
            for l in range(n + 1):
                s = Fraction(0)
                for i in range(n + 1):
                    if Vt[k][i]:
                        for j in range(i, n + 1):
                            s += self.table[i][j] * Vt[k][i] * V[j][l]
                out[k][l] = scale * s
        return out

    def base_factor(self, base):
        """rho' in the based formula: 1, or base**-n in the multiplicative case."""
        if base is None or self.case.is_additive:
            return Fraction(1)
        base = Fraction(base)
        if base == 0:
            raise DegenerateInput("multiplicative base point must be nonzero")
        return base ** (-self.n)

    def to_json(self):
        n = self.n
        return {
            "n": n,
            "case": self.case.tag,
            "gamma": str(self.case.gamma),
            "rho": str(self.rho),
            "a": [str(a) for a in self.relation],
            "g": [[str(self.table[i][j]) for j in range(n + 1)] for i in range(n + 1)],
        }


def build_form(n, case):
    if n < 1:
        raise ConfigError("n must be at least 1")
    a = relation_coefficients(n, case)
    check = relation_coefficients_lagrange(n, case)
    if a != check:
        raise AssertionError("relation coefficients disagree between solve and closed form")
    rho = case.rho(n)
    table = tuple(
        tuple(rho ** (n - j) * a[n + 1 + i - j] if j >= i else Fraction(0)
              for j in range(n + 1))
        for i in range(n + 1))
    return InvariantForm(n, case, tuple(a), rho, table)


def _as_poly(P):
    return P if isinstance(P, Poly) else Poly(P)


def evaluate_form(F, P, Q, base=None):
    """g(P, Q) using nodes started at ``base``.

    With base = None (or the first node) this is the defining formula.
    For another base x the value is rho' * sum g_ij P(x_i) Q(x_j) where x_i
    runs through the progression from x and rho' = x**-n multiplicatively,
    which again equals g(P, Q) by invariance.
    """
    P, Q = _as_poly(P), _as_poly(Q)
    if P.degree > F.n or Q.degree > F.n:
        raise ConfigError("polynomials must have degree <= n = %d" % F.n)
    n = F.n
    nodes = F.case.nodes(n + 1, None if base is None else Fraction(base))
    # integer arithmetic over common denominators: node = u / v, P = cP / LP
    v = lcm(*(x.denominator for x in nodes))
    us = [int(x * v) for x in nodes]
    vpow = [v ** k for k in range(n + 1)]

    def numerators(R):
        L = lcm(*(c.denominator for c in R.coeffs)) if R.coeffs else 1
        c = [int(x * L) for x in R.coefficient_list(n + 1)]
        return [sum(c[k] * u ** k * vpow[n - k] for k in range(n + 1)) for u in us], L

    pv, LP = numerators(P)
    qv, LQ = numerators(Q)
    ints, den = F.scaled
    s = 0
    for i in range(n + 1):
        if pv[i]:
            row = ints[i]
            s += pv[i] * sum(row[j] * qv[j] for j in range(i, n + 1))
    return F.base_factor(base) * Fraction(s, den * LP * LQ * v ** (2 * n))


def evaluate_form_at_points(F, P, Q, points):
    """sum g_ij P(points_i) Q(points_j) for arbitrary (interval) points."""
    pv = [P(x) for x in points]
    qv = [Q(x) for x in points]
    s = 0
    for i in range(F.n + 1):
        for j in range(i, F.n + 1):
            if F.table[i][j]:
                s = s + pv[i] * qv[j] * F.table[i][j]
    return s


def translate_poly(P, x, case):
    """P(x + T) in the additive case, P(x T) in the multiplicative case."""
    P = _as_poly(P)
    x = Fraction(x)
    if case.is_additive:
        return P.shift(x)
    if x == 0:
        raise DegenerateInput("multiplicative translation by 0 is not invertible")
    return P.scale(x)


def gram_determinant(F):
    return det(F.gram())
