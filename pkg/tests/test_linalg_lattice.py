from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from conjapprox.lattice import enumerate_short, is_lll_reduced, lll_reduce
from conjapprox.linalg import det, inverse, matmul, nullspace, rank

matrices = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))


@given(matrices)
def test_det_rank_against_sympy(M):
    S = sympy.Matrix(M)
    assert det(M) == S.det()
    assert rank(M) == S.rank()


@given(matrices)
def test_nullspace_and_inverse(M):
    for v in nullspace(M):
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M)
    if det(M):
        I = matmul(M, inverse(M))
        assert all(I[i][j] == (i == j) for i in range(len(M)) for j in range(len(M)))


@given(matrices)
def test_lll_preserves_lattice(M):
    if not det(M):
        return
    red, U = lll_reduce(M)
    assert abs(det(red)) == abs(det(M))
    assert is_lll_reduced(red)


def test_enumerate_short_counts_a_disc():
    pts = enumerate_short([[1, 0], [0, 1]], 2)
    # (1,0),(0,1),(1,1),(1,-1) up to sign
    assert sorted(map(tuple, pts)) == [(0, 1), (1, -1), (1, 0), (1, 1)]
