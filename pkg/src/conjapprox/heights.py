"""Heights over Q.

Over Q the multiplicative height prod_v ||x||_v of a nonzero vector equals
the sup norm of its primitive integer representative.  Every function here
uses that closed form; ``height_vector_by_places`` recomputes the product
place by place and serves as an independent cross-check.
"""

from fractions import Fraction
from itertools import combinations

from sympy import Poly as SymPoly
from sympy import factor_list, symbols

from .errors import ConfigError, DegenerateInput
from .intervals import IntervalReal
from .linalg import integer_rows, maximal_minors, primitive_integer_vector, rank
from .places import abs_at_place, places_of
from .poly import Poly


class RankDeficientHeight(Fraction):
    """A zero height produced by a rank-deficient matrix.

    Compares equal to 0 but remembers the rank that was found, so callers
    that treat H(M) = 0 as meaningful can still tell it apart.
    """

    def __new__(cls, rank_found, rows):
        self = super().__new__(cls, 0)
        self.rank_found = rank_found
        self.rows = rows
        return self

    def __repr__(self):
        return "RankDeficientHeight(rank=%d of %d)" % (self.rank_found, self.rows)


def _nonzero_vector(x):
    x = [Fraction(c) for c in x]
    if not any(x):
        raise DegenerateInput("height of the zero vector is undefined")
    return x


def height_vector(x):
    """H(x) for a nonzero rational vector."""
    x = _nonzero_vector(x)
    return Fraction(max(abs(c) for c in primitive_integer_vector(x)))


def height_vector_by_places(x):
    """Same quantity as ``height_vector``, as an explicit product over places."""
    x = _nonzero_vector(x)
    out = Fraction(1)
    for v in places_of(x):
        out *= max(abs_at_place(c, v) for c in x)
    return out


def height_polynomial(P):
    if not isinstance(P, Poly):
        P = Poly(P)
    if not P:
        raise DegenerateInput("height of the zero polynomial is undefined")
    return height_vector(P.coeffs)


def height_matrix(M):
    """H(M) for an m x n matrix (m <= n): height of its vector of m-minors.

    A rank-deficient matrix returns a ``RankDeficientHeight`` zero.
    """
    M = [[Fraction(c) for c in row] for row in M]
    m = len(M)
    if m == 0 or m > len(M[0]):
        raise ConfigError("height_matrix needs 1 <= rows <= columns")
    minors = maximal_minors(M)
    if not any(minors):
        return RankDeficientHeight(rank(M), m)
    return height_vector(minors)


def height_subspace(basis):
    """Height of the subspace spanned by linearly independent rows."""
    basis = [[Fraction(c) for c in row] for row in basis]
    if rank(basis) != len(basis):
        raise DegenerateInput("subspace basis rows are linearly dependent")
    return height_matrix(basis)


def polynomial_subspace_basis(polys, n):
    """Coefficient rows (length n+1) of polynomials in E_n."""
    return [P.coefficient_list(n + 1) for P in polys]


def product_space_basis(P, m, n):
    """Rows for P * E_m inside E_n (P * T^k, k = 0..m)."""
    if P.degree + m > n:
        raise ConfigError("P * E_m does not fit in E_n")
    return polynomial_subspace_basis([P * Poly.monomial(k) for k in range(m + 1)], n)


def product_structure_ratio(P, m, n):
    """H(P * E_{m-1}) / H(P)^m, the quantity bounded above and below in terms of n."""
    V = product_space_basis(P, m - 1, n)
    return height_subspace(V) / height_polynomial(P) ** m


def is_irreducible(P):
    """Irreducibility over Q of a nonconstant polynomial (exact factorization)."""
    if not isinstance(P, Poly):
        P = Poly(P)
    if P.degree < 1:
        return False
    T = symbols("T")
    ints = P.primitive_part().integer_coefficients()
    _, factors = factor_list(SymPoly(list(reversed(ints)), T))
    return len(factors) == 1 and factors[0][1] == 1


def height_algebraic(min_poly):
    """Height of an algebraic number given its integer minimal polynomial."""
    if not isinstance(min_poly, Poly):
        min_poly = Poly(min_poly)
    if min_poly.degree < 1 or not min_poly.is_integral:
        raise ConfigError("minimal polynomial must be a nonconstant integer polynomial")
    if min_poly.content() != 1:
        raise ConfigError("minimal polynomial must be primitive")
    if not is_irreducible(min_poly):
        raise ConfigError("polynomial %s is reducible over Q" % min_poly)
    return int(min_poly.norm_inf())


def projective_distance(xi, z):
    """Projective distance max|xi_j z_k - xi_k z_j| / (||xi|| ||z||).

    ``xi`` holds IntervalReal (or rational) coordinates, ``z`` rationals.
    """
    if len(xi) != len(z):
        raise ConfigError("coordinate vectors must have the same length")
    xi = [x if isinstance(x, IntervalReal) else IntervalReal.point(Fraction(x)) for x in xi]
    z = [Fraction(c) for c in z]
    if not any(z):
        raise DegenerateInput("z is the zero vector")
    if all(x.lower == 0 == x.upper for x in xi):
        raise DegenerateInput("xi is the zero vector")
    bits = min(x.bits for x in xi)
    num = None
    for j, k in combinations(range(len(z)), 2):
        term = abs(xi[j] * z[k] - xi[k] * z[j])
        num = term if num is None else IntervalReal.make(
            max(num.lower, term.lower), max(num.upper, term.upper), bits)
    if num is None:
        return IntervalReal.point(0, bits)
    norm_xi = IntervalReal.make(max(x.mig for x in xi), max(x.mag for x in xi), bits)
    norm_z = max(abs(c) for c in z)
    out = num / (norm_xi * norm_z)
    # the true value lies in [0, 1]
    return IntervalReal(max(out.lower, Fraction(0)), min(out.upper, Fraction(1)), bits) \
        if out.lower <= 1 else out
