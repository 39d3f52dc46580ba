"""Independent reference computations (sympy) used by several test modules."""

import sympy

from conjapprox.hankel import hankel_matrix

T = sympy.symbols("T")


def sympy_irreducible(int_coeffs):
    """Irreducibility over Q of a polynomial given constant term first."""
    return sympy.Poly([int(c) for c in reversed(int_coeffs)], T).is_irreducible


def hankel_oracle(y, k):
    """(h, P, dim V_(h-1)) from sympy ranks and kernels, or None.

    P is the gcd of a kernel basis of M_(h-1); when the product-space identity
    holds that gcd is the rank-drop factor.
    """
    ranks = [sympy.Matrix(hankel_matrix(y, l)).rank() for l in range(k + 1)]
    h = next((l for l in range(1, k + 1) if ranks[l] <= l), None)
    if h is None:
        return None
    kernel = sympy.Matrix(hankel_matrix(y, h - 1)).nullspace()
    polys = [sympy.Poly(list(reversed(list(v))), T) for v in kernel]
    g = polys[0]
    for p in polys[1:]:
        g = sympy.gcd(g, p)
    return h, g, len(kernel)


def same_up_to_scalar(P, g):
    ours = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator)
                                     for c in P.coeffs])), T)
    return ours.monic() == g.monic()
