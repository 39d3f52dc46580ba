"""
Successive minima of a body and of its dual
===========================================

The body C(X, Y) holds integer polynomials of degree at most n with
coefficients at most X and a value at ln 2 at most 1/Y.  We bracket its
successive minima, the minima of the dual body, and watch the Mahler
products lambda_i * lambda*_(d+1-i) stay between 1 and a small constant.
"""

import matplotlib.pyplot as plt

from conjapprox.bodies import (BodySpec, dual_minima, mahler_products, minkowski_product,
                               successive_minima, volume_bounds)
from conjapprox.intervals import parse_point

ln2 = parse_point("const:ln2")
Ys = [2, 4, 8, 16, 32, 64]
first, last, products = [], [], []
for Y in Ys:
    spec = BodySpec(3, [ln2], X=8, Y=Y)
    rep = successive_minima(spec, "exhaustive")
    dual = dual_minima(spec, method="exhaustive")
    first.append(float(rep.lambdas[0].upper))
    last.append(float(rep.lambdas[-1].upper))
    products.append([float(hi) for _, hi in mahler_products(rep, dual)])
    ratio = minkowski_product(rep, volume_bounds(spec)) / 2 ** 4
    print("Y = %3d  lambda = %s  Minkowski ratio %.3f"
          % (Y, ", ".join("%.3f" % float(l.upper) for l in rep.lambdas), float(ratio)))

###############################################################################
# A smaller value at ln 2 costs larger coefficients, so the first minimum
# grows with Y while the Mahler products stay close to 1.

fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
a.plot(Ys, first, "o-", label="lambda_1")
a.plot(Ys, last, "s-", label="lambda_4")
a.set_xscale("log", base=2)
a.set_xlabel("Y")
a.legend()
for i in range(4):
    b.plot(Ys, [p[i] for p in products], "o-", label="i = %d" % (i + 1))
b.set_xscale("log", base=2)
b.set_ylabel("upper bound of lambda_i lambda*_(5-i)")
b.legend()
fig.tight_layout()
fig.savefig("minima_and_duality.png", dpi=120)
