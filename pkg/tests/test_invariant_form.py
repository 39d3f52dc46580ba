from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conjapprox.errors import ConfigError, DegenerateInput
from conjapprox.invariant_form import (ProgressionCase, build_form, evaluate_form,
                                       gram_determinant, relation_coefficients, translate_poly)
from conjapprox.poly import Poly

CASES = [ProgressionCase.additive(1), ProgressionCase.additive(Fraction(1, 2)),
         ProgressionCase.additive(-3), ProgressionCase.multiplicative(2),
         ProgressionCase.multiplicative(Fraction(3, 2))]
small_q = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def divided_difference_weights(nodes):
    """w_i = 1 / prod_{j != i} (x_i - x_j), normalized so the last weight is 1."""
    w = []
    for i, x in enumerate(nodes):
        d = Fraction(1)
        for j, y in enumerate(nodes):
            if j != i:
                d *= x - y
        w.append(1 / d)
    return [c / w[-1] for c in w]


@pytest.mark.parametrize("n", range(1, 9))
def test_additive_relation_is_binomial(n):
    a = relation_coefficients(n, ProgressionCase.additive(1))
    assert a == [(-1) ** (n + 1 - i) * comb(n + 1, i) for i in range(n + 2)]


@pytest.mark.parametrize("case", CASES, ids=lambda c: "%s-%s" % (c.tag, c.gamma))
@pytest.mark.parametrize("n", [1, 3, 5])
def test_relation_matches_divided_differences(case, n):
    assert relation_coefficients(n, case) == divided_difference_weights(case.nodes(n + 2))


@pytest.mark.parametrize("case", CASES, ids=lambda c: "%s-%s" % (c.tag, c.gamma))
@given(n=st.integers(1, 6), p=st.lists(small_q, min_size=7, max_size=7),
       q=st.lists(small_q, min_size=7, max_size=7), x=small_q)
def test_translation_invariance(case, n, p, q, x):
    if not case.is_additive and x == 0:
        return
    F = build_form(n, case)
    P, Q = Poly(p[:n + 1]), Poly(q[:n + 1])
    lhs = evaluate_form(F, translate_poly(P, x, case), translate_poly(Q, x, case))
    factor = 1 if case.is_additive else x ** n
    assert lhs == factor * evaluate_form(F, P, Q)


@pytest.mark.parametrize("case", CASES, ids=lambda c: "%s-%s" % (c.tag, c.gamma))
def test_gram_matrix_agrees_with_node_formula(case):
    n = 4
    F = build_form(n, case)
    G = F.gram()
    P, Q = Poly([1, -2, 0, 3, 1]), Poly([2, 0, 1, -1, 5])
    p, q = P.coefficient_list(n + 1), Q.coefficient_list(n + 1)
    via_gram = sum(p[k] * G[k][l] * q[l] for k in range(n + 1) for l in range(n + 1))
    assert via_gram == evaluate_form(F, P, Q)
    assert gram_determinant(F) != 0


def test_degenerate_progressions():
    with pytest.raises(ConfigError):
        ProgressionCase.additive(0)
    with pytest.raises(DegenerateInput):
        build_form(2, ProgressionCase.multiplicative(-1))
    with pytest.raises(ConfigError):
        build_form(0, ProgressionCase.additive(1))
