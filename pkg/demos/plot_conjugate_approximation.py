"""
Approximating ln 2 by an algebraic integer's conjugate
======================================================

For each X the pipeline builds an Eisenstein (hence irreducible) integer
polynomial of degree 8 with a certified root within a window of ln 2, then
reports the measured exponent log(1/|ln 2 - alpha|) / log H.
"""

import matplotlib.pyplot as plt

from conjapprox.approximator import approximation_grid, exponent_ledger
from conjapprox.intervals import parse_point

ledger = exponent_ledger(8, 1, [parse_point("const:ln2")])
print("nu =", ledger.nu, " target exponent =", ledger.target_exponent,
      " Y = X^%s" % ledger.y_exponent)
print(*ledger.assumptions, sep="\n")

results = approximation_grid(ledger, 10**4, 2, 6)
for r in results:
    print("X = %7s  H = %5d  |xi - alpha| <= %.3e  exponent >= %.3f"
          % (r.X, r.height, float(r.distances[0].upper), float(r.measured_exponent.lower)))

###############################################################################
# Distances shrink strictly along the grid.  The exponent wanders because the
# height of the constructed polynomial is only controlled up to a constant.

Xs = [float(r.X) for r in results]
fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
a.loglog(Xs, [float(r.distances[0].upper) for r in results], "o-")
a.set_xlabel("X")
a.set_ylabel("|ln 2 - alpha|")
b.semilogx(Xs, [float(r.measured_exponent.lower) for r in results], "o-")
b.axhline(float(ledger.target_exponent), ls="--", color="gray")
b.set_xlabel("X")
b.set_ylabel("measured exponent")
fig.tight_layout()
fig.savefig("conjugate_approximation.png", dpi=120)
