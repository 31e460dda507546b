from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from ohcp import linalg
from ohcp.linalg import (MatrixSizeError, determinant, fraction_free_solve, homology, inverse,
                         kernel_basis, matmul, matvec, rank, smith_normal_form, solve_exact)
from ohcp.complex import permutation_sign

from conftest import complex_of

small_ints = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def any_matrix(draw, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return draw(matrices(r, c))


def leibniz(M):
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        term = permutation_sign(perm)
        for i, j in enumerate(perm):
            term *= M[i][j]
        total += term
    return total


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: matrices(n, n)))
def test_bareiss_matches_leibniz(M):
    assert determinant(M) == leibniz(M)


@given(st.permutations(range(5)))
def test_permutation_matrix_determinant(perm):
    P = [[int(j == perm[i]) for j in range(5)] for i in range(5)]
    assert determinant(P) == permutation_sign(perm)


@settings(max_examples=150, deadline=None)
@given(any_matrix())
def test_kernel_basis_is_annihilated_and_complete(M):
    ker = kernel_basis(M)
    cols = len(M[0])
    for v in ker:
        assert not any(matvec(M, v))
    assert len(ker) == cols - rank(M)
    if ker:
        assert rank(ker) == len(ker)


@settings(max_examples=150, deadline=None)
@given(any_matrix())
def test_smith_round_trip(M):
    snf = smith_normal_form(M)
    assert [list(r) for r in matmul(matmul(snf.U, M), snf.V)] == [list(r) for r in snf.D]
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    d = snf.invariant_factors
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert snf.rank == rank(M) == len(d)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, 2))))
def test_fraction_free_solve_agrees_with_rational_solve(pair):
    A, Bm = pair
    res = fraction_free_solve(A, Bm)
    if determinant(A) == 0:
        assert res is None
        return
    d, Y = res
    assert abs(d) == abs(determinant(A))
    X = [[Fraction(v, d) for v in row] for row in Y]
    assert matmul(A, X) == [[Fraction(v) for v in row] for row in Bm]


def test_solve_exact_inconsistent():
    assert solve_exact([[1, 1], [2, 2]], [1, 3]) is None
    assert solve_exact([[1, 1], [2, 2]], [1, 2]) == [1, 0]


def test_inverse_of_singular_matrix():
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])
    assert inverse([[2, 0], [0, 4]]) == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]


def test_size_guard():
    with pytest.raises(MatrixSizeError):
        smith_normal_form([[0] * (linalg.MAX_DIM + 1)])


@pytest.mark.parametrize("name, expect", [
    ("tetrahedron", ["Z", "0", "Z"]),
    ("mobius5", ["Z", "Z", "0"]),
    ("rp2", ["Z", "Z/2", "0"]),
    ("filled_core", ["Z", "0", "0"]),
    ("hollow_triangle", ["Z", "Z"]),
])
def test_homology_of_fixtures(name, expect):
    K = complex_of(name)
    assert [str(homology(K, p)) for p in range(K.dimension + 1)] == expect


def test_rp2_torsion_and_betti():
    H = homology(complex_of("rp2"), 1)
    assert H.betti == 0 and H.torsion == (2,) and not H.is_trivial
