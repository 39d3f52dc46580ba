"""
Translation-invariant forms on a progression
============================================

Five nodes in arithmetic progression carry a single linear relation, and
that relation builds an upper-triangular bilinear form which does not notice
translations.  Here we build it, look at its coefficient table and check the
invariance on a couple of random polynomials.
"""

import random
from fractions import Fraction

from conjapprox.invariant_form import (ProgressionCase, build_form, evaluate_form,
                                       translate_poly)
from conjapprox.poly import Poly

# additive progression 0, 1, 2, 3, 4 and degree-4 polynomials
form = build_form(4, ProgressionCase.additive(1))
print("relation:", [str(a) for a in form.relation])
for row in form.table:
    print("  ".join("%4s" % c for c in row))

###############################################################################
# The relation is the fifth finite difference.  Translating both arguments
# leaves the form unchanged:

rng = random.Random(0)
P = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)])
Q = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)])
for x in (Fraction(1, 3), Fraction(-7, 2), Fraction(10)):
    moved = evaluate_form(form, translate_poly(P, x, form.case), translate_poly(Q, x, form.case))
    print("x = %5s   g(P, Q) = %s   g(P(x+T), Q(x+T)) = %s" % (x, evaluate_form(form, P, Q), moved))

###############################################################################
# In the geometric case dilation multiplies the form by x**n.

mult = build_form(3, ProgressionCase.multiplicative(2))
P3, Q3 = Poly([1, -1, 2, 1]), Poly([3, 0, -2, 1])
x = Fraction(3, 2)
lhs = evaluate_form(mult, translate_poly(P3, x, mult.case), translate_poly(Q3, x, mult.case))
print("ratio after dilation by 3/2:", lhs / evaluate_form(mult, P3, Q3), "=", x ** 3)
