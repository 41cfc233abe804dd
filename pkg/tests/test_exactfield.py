import random

import pytest

from ppcat.errors import DomainError
from ppcat.exactfield import GF, QQ, Matrix, hstack, kron, same_span


def test_rref_identity():
    m = Matrix.identity(QQ, 2)
    r, pivots = m.rref()
    assert r == m
    assert pivots == [0, 1]


def test_rref_zero():
    m = Matrix.zeros(QQ, 3, 2)
    r, pivots = m.rref()
    assert r == m
    assert pivots == []


def test_rref_rank_one():
    m = Matrix.from_int_rows(QQ, [[2, 4], [1, 2]])
    r, pivots = m.rref()
    assert r == Matrix.from_int_rows(QQ, [[1, 2], [0, 0]])
    assert pivots == [0]


def test_kernel_identity():
    assert Matrix.identity(QQ, 3).kernel_basis().cols == 0


def test_kernel_zero_matrix():
    k = Matrix.zeros(QQ, 2, 3).kernel_basis()
    assert k.cols == 3
    assert k.rank() == 3


def test_kernel_f2_row():
    m = Matrix.from_int_rows(GF(2), [[1, 1]])
    k = m.kernel_basis()
    assert k.cols == 1
    assert k.column_vector(0) == [GF(2).one(), GF(2).one()]
    assert (m * k).is_zero()


def test_solve_identity():
    b = Matrix.from_int_rows(QQ, [[3], [7]])
    assert Matrix.identity(QQ, 2).solve(b) == b


def test_solve_inconsistent():
    a = Matrix.zeros(QQ, 2, 2)
    b = Matrix.from_int_rows(QQ, [[1], [0]])
    assert a.solve(b) is None


def test_solve_division():
    a = Matrix.from_int_rows(QQ, [[2]])
    b = Matrix.from_int_rows(QQ, [[3]])
    x = a.solve(b)
    assert x is not None
    assert x.data[0][0] * 2 == 3


def test_solve_shape_error():
    with pytest.raises(DomainError):
        Matrix.zeros(QQ, 2, 2).solve(Matrix.zeros(QQ, 3, 1))


def _random_matrix(field, rng, rows, cols, span=5):
    return Matrix.from_int_rows(
        field, [[rng.randrange(-span, span + 1) for _ in range(cols)] for _ in range(rows)]
    )


@pytest.mark.parametrize("field", [QQ, GF(2), GF(5)])
def test_rank_nullity_randomized(field):
    rng = random.Random(20240 + field.char)
    for _ in range(40):
        rows = rng.randrange(0, 6)
        cols = rng.randrange(0, 6)
        m = _random_matrix(field, rng, rows, cols)
        k = m.kernel_basis()
        assert m.rank() + k.cols == m.cols
        if k.cols:
            assert (m * k).is_zero()


@pytest.mark.parametrize("field", [QQ, GF(3)])
def test_solve_exactness_randomized(field):
    rng = random.Random(77 + field.char)
    for _ in range(30):
        rows = rng.randrange(1, 5)
        cols = rng.randrange(1, 5)
        a = _random_matrix(field, rng, rows, cols)
        x0 = _random_matrix(field, rng, cols, 1)
        b = a * x0
        x = a.solve(b)
        assert x is not None
        assert a * x == b


def test_pivot_columns_full_rank():
    rng = random.Random(3)
    for _ in range(20):
        m = _random_matrix(QQ, rng, rng.randrange(1, 5), rng.randrange(1, 5))
        basis = m.column_space_basis()
        assert basis.rank() == basis.cols == m.rank()
        assert same_span(basis, m)


def test_kron_shape_and_values():
    a = Matrix.from_int_rows(QQ, [[1, 2]])
    b = Matrix.from_int_rows(QQ, [[3], [4]])
    k = kron(a, b)
    assert (k.rows, k.cols) == (2, 2)
    assert k == Matrix.from_int_rows(QQ, [[3, 6], [4, 8]])


def test_inverse():
    m = Matrix.from_int_rows(QQ, [[1, 1], [0, 1]])
    inv = m.inverse()
    assert inv is not None
    assert m * inv == Matrix.identity(QQ, 2)
    assert Matrix.from_int_rows(QQ, [[1, 1], [1, 1]]).inverse() is None


def test_hstack_empty_cols():
    a = Matrix.zeros(QQ, 2, 0)
    b = Matrix.identity(QQ, 2)
    assert hstack([a, b]) == b
