"""
Where small-value polynomials exist
===================================

A degree-n integer polynomial with coefficients at most Y and values at most
Y^-e on n + 1 - t points of a progression is a lattice point of a convex
body; its existence is decided by the first minimum of that body.

For rational points the answer can be worked out by hand, which makes a
good sanity check; for ln 2, ln 2 + 1, ... we watch the first minimum.
"""

from fractions import Fraction

import matplotlib.pyplot as plt

from conjapprox.gelfond import ProgressionPoints, criterion_search
from conjapprox.intervals import parse_point
from conjapprox.invariant_form import ProgressionCase

###############################################################################
# Points 1/2, 3/2, ..., 9/2 and exponent 1: the last four values must vanish,
# so Q is a multiple of (2T-3)(2T-5)(2T-7)(2T-9), of height 1488.

half = ProgressionPoints(ProgressionCase.additive(1), parse_point("rat:1/2"), 5)
for Y in (1000, 1487, 1488, 10**5):
    r = criterion_search(half, 4, 1, Y, 1)
    print("Y = %6d  %-17s  Q = %s" % (Y, r.certainty, r.Q))

###############################################################################
# Transcendental seed: the first minimum along a Y grid at e = 9/50.

ln2 = ProgressionPoints(ProgressionCase.additive(1), parse_point("const:ln2"), 6)
Ys = [10 ** k for k in range(2, 7)]
lams = []
for Y in Ys:
    r = criterion_search(ln2, 5, 1, Y, Fraction(9, 50))
    lams.append(float(r.lambda1.upper))
    print("Y = %8d  lambda_1 in [%.4f, %.4f]  %s"
          % (Y, float(r.lambda1.lower), float(r.lambda1.upper), r.certainty))

fig, ax = plt.subplots(figsize=(5, 3.5))
ax.semilogx(Ys, lams, "o-")
ax.axhline(1, ls="--", color="gray")
ax.set_xlabel("Y")
ax.set_ylabel("first minimum")
fig.tight_layout()
fig.savefig("small_value_frontier.png", dpi=120)
