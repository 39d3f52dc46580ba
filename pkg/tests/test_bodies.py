import itertools
from fractions import Fraction
from math import ceil

import pytest
import sympy

from conjapprox.bodies import (NO, YES, BodySpec, body_membership, body_volume,
                               construct_member, dual_minima, form_sandwich_constants,
                               is_eisenstein, minkowski_product, progression_specs,
                               successive_minima, verify_form_sandwich, volume_bounds)
from conjapprox.errors import ConfigError, InfeasibleError
from conjapprox.heights import is_irreducible
from conjapprox.intervals import PointSpec, parse_point
from conjapprox.invariant_form import ProgressionCase, build_form
from conjapprox.places import REAL, Place
from conjapprox.poly import Poly


def exact_gauge(v, eta, X, Y):
    value = sum(c * eta ** k for k, c in enumerate(v))
    return max(max(abs(c) for c in v) / X, Y * abs(value))


def brute_force_minima(n, eta, X, Y):
    """Greedy independent sequence over a box that provably holds every minimum."""
    d = n + 1
    bound = max(exact_gauge([int(i == k) for i in range(d)], eta, X, Y) for k in range(d))
    R = ceil(bound * X)
    vecs = [v for v in itertools.product(range(-R, R + 1), repeat=d) if any(v)]
    vecs.sort(key=lambda v: exact_gauge(v, eta, X, Y))
    chosen, out = [], []
    for v in vecs:
        if sympy.Matrix(chosen + [list(v)]).rank() > len(chosen):
            chosen.append(list(v))
            out.append(exact_gauge(v, eta, X, Y))
            if len(out) == d:
                return out


@pytest.mark.parametrize("n,eta,X,Y", [(1, Fraction(1, 3), 3, 5), (1, Fraction(-2, 7), 4, 4),
                                        (2, Fraction(1, 2), 2, 3), (2, Fraction(3, 4), 3, 2)])
def test_minima_match_brute_force(n, eta, X, Y):
    spec = BodySpec(n, [PointSpec.rational(eta)], X=X, Y=Y)
    rep = successive_minima(spec, "exhaustive")
    oracle = brute_force_minima(n, eta, Fraction(X), Fraction(Y))
    for lam, want in zip(rep.lambdas, oracle):
        assert lam.contains(want)


def test_reduced_tier_brackets_exhaustive():
    spec = BodySpec(3, [parse_point("const:ln2")], X=8, Y=8)
    ex = successive_minima(spec, "exhaustive")
    red = successive_minima(spec, "reduced")
    for a, b in zip(ex.lambdas, red.lambdas):
        assert b.lower <= a.upper and a.lower <= b.upper


def test_box_volume_and_minkowski():
    spec = BodySpec(2, (), X=3, Y=1)
    vol, how = body_volume(spec)
    assert how == "exact" and vol.contains(6 ** 3)
    rep = successive_minima(spec, "exhaustive")
    prod = minkowski_product(rep, vol)
    assert 8 <= prod <= 8 * (1 + Fraction(1, 2 ** 200))
    assert minkowski_product(rep, volume_bounds(spec)) == 8


def test_membership():
    spec = BodySpec(2, [PointSpec.rational(Fraction(1, 2))], X=4, Y=4)
    assert body_membership(Poly([-1, 2]), spec) == YES
    assert body_membership(Poly([1, 1]), spec) == NO
    assert body_membership([Fraction(1, 2), 0, 0], spec) == NO


def test_spec_validation():
    with pytest.raises(ConfigError):
        BodySpec(2, [PointSpec.rational(1)], X=Fraction(1, 2), Y=2)
    with pytest.raises(ConfigError):
        BodySpec(1, [PointSpec.rational(1), PointSpec.rational(2)], multiplicities=(1, 1),
                 X=2, Y=2)
    with pytest.raises(ConfigError):
        BodySpec(2, [PointSpec.rational(1), PointSpec.rational(1)], X=2, Y=2)
    with pytest.raises(ConfigError):
        BodySpec(2, [PointSpec.rational(1)], X=2, Y=2, which="Cbar")


def test_construct_member_is_eisenstein():
    spec = BodySpec(4, [parse_point("const:ln2")], X=16, Y=16)
    rep = successive_minima(spec, "reduced")
    eis = Poly([2, 0, 0, 0, 1])
    member = construct_member(spec, [(Place.prime(2), eis, 2),
                                     (REAL, Poly([0] * 4 + [10**4]), 10**4)], rep)
    assert is_eisenstein(member.P, 2)
    assert is_irreducible(member.P)
    assert member.real_scale <= 10**4


def test_construct_member_budget_too_small():
    spec = BodySpec(3, [parse_point("const:ln2")], X=16, Y=16)
    with pytest.raises(InfeasibleError):
        construct_member(spec, [(Place.prime(2), Poly([2, 0, 0, 1]), 2),
                                (REAL, Poly([0, 0, 0, 1]), Fraction(1, 100))])


def test_dual_minima_reciprocal_on_box():
    spec = BodySpec(2, (), X=4, Y=1)
    rep = dual_minima(spec, method="exhaustive")
    assert all(l.contains(4) for l in rep.lambdas)


def test_form_sandwich_additive():
    n, t = 4, 2
    case = ProgressionCase.additive(1)
    F = build_form(n, case)
    xi = parse_point("const:ln2")
    points = [xi.affine(add=i) for i in range(n + 1)]
    const = form_sandwich_constants(F, points, t)
    dirs = [[(-1) ** (i * j) * (i + j + 1) for j in range(n + 1)] for i in range(6)]
    chk = verify_form_sandwich(F, points, t, 16, 8, dirs, const)
    assert chk.inner_ok and chk.outer_ok and chk.primes_ok
    C, Cb = progression_specs(points, t, 16, 8)
    assert C.t == t and len(Cb.continuation) == n + 1 - t
