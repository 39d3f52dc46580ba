import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conjapprox.errors import ConfigError, DegenerateInput
from conjapprox.heights import (height_algebraic, height_matrix, height_polynomial,
                                height_subspace, height_vector, height_vector_by_places,
                                is_irreducible, product_space_basis, projective_distance)
from conjapprox.intervals import IntervalReal
from conjapprox.places import REAL, Place, abs_at_place, product_over_places, valuation
from conjapprox.poly import Poly

nonzero_q = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6).filter(bool)
small_q = st.fractions(min_value=-50, max_value=50, max_denominator=30)
vectors = st.lists(small_q, min_size=1, max_size=6).filter(any)


def test_valuation_and_absolute_values():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1
    assert abs_at_place(Fraction(12, 5), Place.prime(2)) == Fraction(1, 4)
    assert abs_at_place(Fraction(12, 5), Place.prime(5)) == 5
    assert abs_at_place(Fraction(-12, 5), REAL) == Fraction(12, 5)
    assert abs_at_place(0, Place.prime(3)) == 0


def test_bad_places():
    with pytest.raises(ConfigError):
        Place.prime(4)
    with pytest.raises(DegenerateInput):
        valuation(0, 2)
    with pytest.raises(DegenerateInput):
        product_over_places(0)


@given(nonzero_q)
def test_product_formula(a):
    assert product_over_places(a) == 1


@given(vectors)
def test_height_closed_form_matches_place_product(x):
    assert height_vector(x) == height_vector_by_places(x)


@given(vectors, nonzero_q)
def test_height_is_projective(x, c):
    assert height_vector([c * v for v in x]) == height_vector(x)


def test_height_examples():
    assert height_vector([Fraction(1, 2), Fraction(1, 3)]) == 3
    assert height_polynomial(Poly([6, -4, 2])) == 3
    with pytest.raises(DegenerateInput):
        height_vector([0, 0])


def test_rank_deficient_matrix_height_is_zero():
    H = height_matrix([[1, 2, 3], [2, 4, 6]])
    assert H == 0 and H.rank_found == 1


@given(st.integers(0, 2**32))
def test_subspace_height_basis_independent(seed):
    rng = random.Random(seed)
    B = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(2)]
    if sympy.Matrix(B).rank() < 2:
        return
    a, b = rng.randint(-5, 5), rng.randint(-5, 5)
    U = [[1, a], [0, 1]] if seed % 2 else [[1, 0], [b, 1]]
    B2 = [[sum(U[i][k] * B[k][j] for k in range(2)) for j in range(4)] for i in range(2)]
    assert height_subspace(B) == height_subspace(B2)


def test_product_space_basis_shape():
    rows = product_space_basis(Poly([-2, 1]), 1, 3)
    assert rows == [[-2, 1, 0, 0], [0, -2, 1, 0]]


def test_irreducibility_and_algebraic_height():
    assert is_irreducible(Poly([-2, 0, 1]))
    assert not is_irreducible(Poly([-1, 0, 1]))
    assert height_algebraic(Poly([-2, 0, 1])) == 2
    with pytest.raises(ConfigError):
        height_algebraic(Poly([-1, 0, 1]))
    with pytest.raises(ConfigError):
        height_algebraic(Poly([-4, 0, 2]))


def test_projective_distance():
    d = projective_distance([1, 0], [1, 1])
    assert d.contains(1)
    assert projective_distance([2, 4], [1, 2]).contains(0)
    with pytest.raises(DegenerateInput):
        projective_distance([1, 0], [0, 0])
    x = IntervalReal.make(Fraction(99, 100), Fraction(101, 100), 53)
    d = projective_distance([x, IntervalReal.point(1, 53)], [1, 1])
    assert d.lower == 0 and d.upper <= Fraction(1, 40)
