"""
Hankel rank drops and the factor they expose
============================================

A vector y = (y_0, ..., y_n) pairs with polynomials through
phi(P, y) = sum p_i y_i.  When the Hankel matrices (y_(i+j)) lose rank early,
the kernel of the bilinear form B(F, G) = phi(FG, y) is P * E_m for a single
polynomial P, which can be read off exactly.
"""

from conjapprox.hankel import diagnose, hankel_ranks, rank_drop_factor
from conjapprox.intervals import parse_point

# y_i = 3 * 2^i - 5^i: two geometric sequences, so ranks stop growing at 2
y = [3 * 2 ** i - 5 ** i for i in range(7)]
print("y =", y)
print("ranks of M_0..M_3:", hankel_ranks(y, 3))

rep = rank_drop_factor(y, 3)
print("h =", rep.h, " P =", rep.P, " identity holds:", rep.identity_holds)

###############################################################################
# A witness with no structure keeps full rank, and the report says so.

print(rank_drop_factor([1, 0, 3, 1, 7, 2, 5], 3).to_json())

###############################################################################
# The full diagnostic also measures the column bounds of the transformed
# matrices and the small-value ratio of each irreducible factor.

out = diagnose(y, [parse_point("rat:2")], 8, 8, 3, u=1)
for key in ("ranks", "height_ratios", "column_bounds", "factors"):
    print(key, "->", out.get(key))
