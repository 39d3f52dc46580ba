from fractions import Fraction

import mpmath
import pytest

from conjapprox.approximator import (approximate_conjugates, approximation_grid,
                                     check_disjoint, cluster_roots, exponent_ledger,
                                     measured_exponent, nominal_offsets)
from conjapprox.bodies import BodySpec
from conjapprox.errors import ConfigError, InfeasibleError
from conjapprox.intervals import IntervalReal, parse_point
from conjapprox.poly import Poly

from oracles import sympy_irreducible

LN2 = parse_point("const:ln2")


def mpmath_real_roots(coeffs):
    with mpmath.workdps(120):
        roots = mpmath.polyroots([int(c) for c in reversed(coeffs)], maxsteps=400, extraprec=800)
        return [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -60]


def test_ledger_exponents():
    led = exponent_ledger(8, 1, [LN2])
    assert (led.nu, led.target_exponent, led.y_exponent) == (4, 2, Fraction(3, 2))
    led2 = exponent_ledger(8, 2, [LN2, LN2.affine(add=1)], case="thm2")
    assert (led2.nu, led2.target_exponent, led2.y_exponent) == (8, 1, Fraction(1, 4))
    assert led.assumptions and "assumed" in led.assumptions[0]


def test_ledger_rejects_bad_configurations():
    with pytest.raises(ConfigError):
        exponent_ledger(3, 1, [LN2])
    with pytest.raises(ConfigError):
        exponent_ledger(8, 2, [LN2, LN2], case="thm2")
    with pytest.raises(ConfigError):
        exponent_ledger(8, 1, [parse_point("alg:[-2,0,1]@root1")])
    with pytest.raises(ConfigError):
        exponent_ledger(8, 2, [LN2])


def test_nominal_offsets_are_powers_of_two():
    zs = nominal_offsets(100, 1000, [1, 2])
    for z, m in zip(zs, [1, 2]):
        assert z.numerator == 1 and z.denominator & (z.denominator - 1) == 0
        assert z ** m <= Fraction(1, 100000)
        assert (2 * z) ** m > Fraction(1, 100000)


def test_disjointness_fails_at_unit_scale():
    spec = BodySpec(8, [LN2], X=1, Y=1)
    with pytest.raises(InfeasibleError) as exc:
        check_disjoint(spec, nominal_offsets(1, 1, [1]))
    assert exc.value.stage == "disjointness"


def test_cluster_roots_on_known_polynomial():
    P = Poly.from_roots([Fraction(1, 3), Fraction(1, 3) + Fraction(1, 1000), 5])
    c = cluster_roots(P, parse_point("rat:1/3"), 2, Fraction(1, 100))
    assert c.count == 2


def test_measured_exponent_simple():
    d = [IntervalReal.point(Fraction(1, 100), 64)]
    e = measured_exponent(d, 10)
    assert e.contains(2)


def test_pipeline_against_independent_oracles():
    led = exponent_ledger(4, 1, [LN2])
    res = approximate_conjugates(led, 64)
    coeffs = res.P.integer_coefficients()
    assert sympy_irreducible(coeffs)
    assert res.certificates["eisenstein"]
    roots = mpmath_real_roots(coeffs)
    with mpmath.workdps(120):
        nearest = min(roots, key=lambda r: abs(r - mpmath.log(2)))
        enc = res.conjugates[0]
        lo = mpmath.mpf(enc.lower.numerator) / enc.lower.denominator
        hi = mpmath.mpf(enc.upper.numerator) / enc.upper.denominator
        assert lo - mpmath.mpf(10) ** -50 <= nearest <= hi + mpmath.mpf(10) ** -50
        dist = abs(nearest - mpmath.log(2))
        d = res.distances[0]
        assert mpmath.mpf(d.lower.numerator) / d.lower.denominator <= dist * (1 + mpmath.mpf(10) ** -30)
        assert dist <= mpmath.mpf(d.upper.numerator) / d.upper.denominator * (1 + mpmath.mpf(10) ** -30)
    assert res.height == max(abs(c) for c in coeffs)


def test_distances_decrease_along_grid():
    led = exponent_ledger(8, 1, [LN2])
    results = approximation_grid(led, 10**4, 2, 3)
    ups = [r.distances[0].upper for r in results]
    lows = [r.distances[0].lower for r in results]
    assert all(ups[i + 1] < lows[i] for i in range(len(results) - 1))
