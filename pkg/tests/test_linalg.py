from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactpairs.linalg import LinAlgError, Matrix, rat, solve, vstack

rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=4
)


def matrices(rows, cols):
    return st.lists(
        st.lists(rationals, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    ).map(Matrix)


square = st.integers(min_value=1, max_value=4).flatmap(lambda n: matrices(n, n))


def test_rat_coercion():
    assert rat(3) == Fraction(3)
    assert rat("-2/5") == Fraction(-2, 5)
    assert rat(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        rat(0.5)


def test_constructor_rejects_bad_shapes():
    with pytest.raises(LinAlgError):
        Matrix([])
    with pytest.raises(LinAlgError):
        Matrix([[]])
    with pytest.raises(LinAlgError):
        Matrix([[1, 2], [3]])


def test_identity_and_diagonal():
    I = Matrix.identity(3)
    D = Matrix.diagonal([2, 3, 5])
    assert (I @ D).tolist() == D.tolist()
    assert D.det() == 30
    assert D.inverse() == Matrix.diagonal([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)])


def test_from_columns_round_trip():
    A = Matrix([[1, 2], [3, 4], [5, 6]])
    assert Matrix.from_columns([A.column(0), A.column(1)]) == A


def test_apply_matches_matmul():
    A = Matrix([[1, 2], [3, 4]])
    assert A.apply([5, 7]) == (19, 43)
    with pytest.raises(LinAlgError):
        A.apply([1, 2, 3])


def test_hilbert_determinant():
    H = Matrix([[Fraction(1, i + j + 1) for j in range(3)] for i in range(3)])
    assert H.det() == Fraction(1, 2160)
    assert H.is_positive_definite()


def test_singular_matrix():
    A = Matrix([[1, 2], [2, 4]])
    assert A.det() == 0
    assert A.rank() == 1
    with pytest.raises(LinAlgError):
        A.inverse()
    assert A.solve([1, 0]) is None


def test_solve_with_free_variables():
    A = Matrix([[1, 1, 0], [0, 0, 1]])
    x = A.solve([3, 4])
    assert x == (3, 0, 4)


def test_positive_definite_requires_symmetry():
    assert not Matrix([[1, 1], [0, 1]]).is_positive_definite()
    assert not Matrix([[1, 2], [2, 1]]).is_positive_definite()
    assert Matrix([[2, 1], [1, 2]]).is_positive_definite()


def test_leading_principal_minors():
    A = Matrix([[2, 1], [1, 2]])
    assert A.leading_principal_minors() == [2, 3]


def test_vstack():
    A = Matrix([[1, 2]])
    B = Matrix([[3, 4], [5, 6]])
    assert vstack([A, B]).tolist() == [[1, 2], [3, 4], [5, 6]]
    with pytest.raises(LinAlgError):
        vstack([A, Matrix([[1]])])


def _laplace_det(A):
    if A.rows == 1:
        return A[0, 0]
    total = Fraction(0)
    for j in range(A.cols):
        minor = Matrix([
            [A[i, c] for c in range(A.cols) if c != j] for i in range(1, A.rows)
        ])
        total += (-1) ** j * A[0, j] * _laplace_det(minor)
    return total


@given(square)
@settings(max_examples=60)
def test_det_matches_laplace(A):
    assert A.det() == _laplace_det(A)


@given(st.integers(min_value=1, max_value=3).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, n))))
def test_det_multiplicative(pair):
    A, B = pair
    assert (A @ B).det() == A.det() * B.det()


@given(st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: st.tuples(matrices(s[0], s[1]), matrices(s[1], s[2]))
))
def test_transpose_of_product(pair):
    A, B = pair
    assert (A @ B).transpose() == B.transpose() @ A.transpose()


@given(st.tuples(st.integers(1, 4), st.integers(1, 5)).flatmap(lambda s: matrices(*s)))
@settings(max_examples=80)
def test_rank_nullity(A):
    assert A.rank() + len(A.nullspace()) == A.cols


@given(st.tuples(st.integers(1, 4), st.integers(1, 5)).flatmap(lambda s: matrices(*s)))
def test_nullspace_vectors_annihilated(A):
    for v in A.nullspace():
        assert all(x == 0 for x in A.apply(v))


@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: st.tuples(
        matrices(s[0], s[1]),
        st.lists(rationals, min_size=s[1], max_size=s[1]),
    )
))
def test_solve_consistent_system(case):
    A, x0 = case
    b = A.apply(x0)
    x, kernel = solve(A, b)
    assert x is not None
    assert A.apply(x) == b
    diff = tuple(a - b_ for a, b_ in zip(x0, x))
    span = Matrix.from_columns(kernel + [diff]) if kernel else None
    if span is None:
        assert all(d == 0 for d in diff)
    else:
        assert span.rank() == len(kernel)


@given(square)
@settings(max_examples=60)
def test_rref_idempotent(A):
    R, pivots = A.rref()
    R2, pivots2 = R.rref()
    assert R == R2
    assert pivots == pivots2
    assert list(pivots) == sorted(pivots)


@given(square)
@settings(max_examples=60)
def test_inverse_round_trip(A):
    if A.det() == 0:
        with pytest.raises(LinAlgError):
            A.inverse()
    else:
        assert A @ A.inverse() == Matrix.identity(A.rows)


@given(square)
def test_gram_matrix_positive_semidefinite_minors(A):
    G = A.transpose() @ A
    assert G.is_symmetric()
    shifted = G + Matrix.identity(A.rows)
    assert shifted.is_positive_definite()
