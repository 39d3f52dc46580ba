from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conjapprox.errors import ConfigError
from conjapprox.gelfond import (ABSENT, FOUND, ProgressionPoints, below_power,
                                criterion_search, dirichlet_exponent, dirichlet_witness,
                                phi_minimum_scan, rational_power, theorem_exponent)
from conjapprox.intervals import parse_point
from conjapprox.invariant_form import ProgressionCase
from conjapprox.poly import Poly

HALF = ProgressionPoints(ProgressionCase.additive(1), parse_point("rat:1/2"), 5)


def test_exponents():
    assert dirichlet_exponent(5, 1) == Fraction(1, 5)
    assert theorem_exponent(8, 1) == Fraction(4, 5)
    with pytest.raises(ConfigError):
        theorem_exponent(3, 1)


@given(st.fractions(min_value=1, max_value=10**6, max_denominator=50),
       st.fractions(min_value=0, max_value=3, max_denominator=12))
def test_rational_power_encloses(Y, e):
    enc = rational_power(Y, e, 64)
    p, q = e.numerator, e.denominator
    assert enc.lower ** q <= Y ** p <= enc.upper ** q


def test_rational_power_exact_cases():
    enc = rational_power(16, Fraction(1, 2))
    assert enc.lower == enc.upper == 4
    assert below_power(Fraction(1, 4), 16, Fraction(1, 2))
    assert not below_power(Fraction(1, 3), 16, Fraction(1, 2))


def test_progression_points():
    pts = ProgressionPoints(ProgressionCase.multiplicative(2), parse_point("rat:3"), 3).points
    assert [p.exact_value() for p in pts] == [3, 6, 12]
    with pytest.raises(ConfigError):
        ProgressionPoints(ProgressionCase.multiplicative(2), parse_point("rat:0"), 3).points


# With xi = 1/2, 3/2, ..., 9/2 and exponent 1, any nonzero Q(xi_i) is at least
# 1/16, so for Y >= 16 the last four values must vanish and Q is a multiple of
# (2T-3)(2T-5)(2T-7)(2T-9), whose height is 1488.
def test_rational_threshold_matches_hand_derivation():
    below = criterion_search(HALF, 4, 1, 1487, 1)
    at = criterion_search(HALF, 4, 1, 1488, 1)
    assert below.certainty == ABSENT
    assert at.certainty == FOUND
    assert at.Q == Poly([945, -1488, 824, -192, 16]) or at.Q == -Poly([945, -1488, 824, -192, 16])


def test_found_records_are_certified():
    r = criterion_search(HALF, 4, 1, 10**5, 1)
    assert r.found and r.norm_ok and r.values_ok
    assert all(v.upper == 0 for v in r.values)


def test_search_validation():
    with pytest.raises(ConfigError):
        criterion_search(HALF, 3, 1, 100, 1)
    with pytest.raises(ConfigError):
        dirichlet_witness(HALF, 4, 1, 100, delta=1)


def test_transcendental_seed_reports_minimum():
    prog = ProgressionPoints(ProgressionCase.additive(1), parse_point("const:ln2"), 5)
    r = criterion_search(prog, 4, 1, 10**4, Fraction(1, 4))
    assert r.certainty in (FOUND, ABSENT)
    assert r.lambda1.lower > 0


def test_phi_scan_runs():
    out = phi_minimum_scan([parse_point("const:ln2")], 4, 4, [16, 32])
    assert len(out) == 2 and all(p.lambda1.lower > 0 for p in out)


def test_huge_exponent_is_absent():
    prog = ProgressionPoints(ProgressionCase.additive(1), parse_point("const:ln2"), 5)
    r = criterion_search(prog, 4, 1, 100, 50, method="exhaustive")
    assert r.certainty == ABSENT


@pytest.mark.parametrize("seed", ["rat:1/2", "const:ln2"])
def test_reduction_agrees_with_exhaustive_on_small_cases(seed):
    prog = ProgressionPoints(ProgressionCase.additive(1), parse_point(seed), 5)
    for Y in (50, 2000, 10**5):
        ex = criterion_search(prog, 4, 1, Y, 1, method="exhaustive")
        red = criterion_search(prog, 4, 1, Y, 1, method="reduced")
        assert ex.found == red.found
