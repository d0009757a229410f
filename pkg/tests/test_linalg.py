"""Matrices over a prime field, with certified reductions."""
import numpy as np
import pytest

from phmap.errors import (
    NoSolutionError,
    ShapeMismatchError,
    SingularMatrixError,
)
from phmap.ffield import make_field
from phmap.linalg import (
    FieldMatrix,
    extend_to_basis,
    is_invertible,
    kernel_basis,
    mat_inv,
    random_invertible,
    random_matrix,
    rank,
    rref,
    smith_normal_form,
    solve,
)
from oracles import mod_rank, mod_rref

FIELDS = [make_field(2), make_field(7), make_field(1009)]


def random_cases(n_cases, seed):
    rng = np.random.default_rng(seed)
    for i in range(n_cases):
        field = FIELDS[i % len(FIELDS)]
        nrows = int(rng.integers(0, 8))
        ncols = int(rng.integers(0, 8))
        yield random_matrix(nrows, ncols, field, rng), field


def test_rank_matches_naive_row_reduction():
    for m, field in random_cases(500, seed=11):
        rows = m.data.tolist()
        if m.shape[0] and m.shape[1]:
            assert rank(m) == mod_rank(rows, field.p)
        else:
            assert rank(m) == 0


def test_rank_equals_rank_of_transpose():
    for m, _ in random_cases(300, seed=12):
        assert rank(m) == rank(m.transpose())


def test_rank_nullity():
    for m, _ in random_cases(300, seed=13):
        k = kernel_basis(m)
        assert k.shape == (m.shape[1], m.shape[1] - rank(m))
        assert (m @ k).is_zero()
        assert rank(k) == k.shape[1]


def test_rref_pivots_match_naive():
    for m, field in random_cases(300, seed=14):
        if not (m.shape[0] and m.shape[1]):
            continue
        reduced, pivots = rref(m)
        naive_rows, naive_pivots = mod_rref(m.data.tolist(), field.p)
        assert pivots == naive_pivots
        assert reduced.data.tolist()[: len(pivots)] == naive_rows[: len(pivots)]


def test_smith_normal_form_certificate():
    for m, field in random_cases(300, seed=15):
        t = smith_normal_form(m)
        assert (t.row_transform @ m @ t.col_transform) == t.result
        assert is_invertible(t.row_transform)
        assert is_invertible(t.col_transform)
        r = t.rank
        expect = np.zeros(m.shape, dtype=np.int64)
        for i in range(r):
            expect[i, i] = 1
        assert t.result.data.tolist() == expect.tolist()
        assert r == (mod_rank(m.data.tolist(), field.p)
                     if m.shape[0] and m.shape[1] else 0)


def test_solve_recovers_solutions():
    rng = np.random.default_rng(16)
    for _ in range(100):
        field = FIELDS[int(rng.integers(0, 3))]
        nrows = int(rng.integers(1, 7))
        ncols = int(rng.integers(1, 7))
        m = random_matrix(nrows, ncols, field, rng)
        x = random_matrix(ncols, 1, field, rng)
        b = m @ x
        got = solve(m, b)
        assert (m @ got) == b


def test_solve_rejects_inconsistent_system():
    field = make_field(7)
    m = FieldMatrix.from_rows([[1, 0], [1, 0]], field)
    b = FieldMatrix.from_rows([[1], [2]], field)
    with pytest.raises(NoSolutionError):
        solve(m, b)


def test_mat_inv():
    rng = np.random.default_rng(17)
    for _ in range(60):
        field = FIELDS[int(rng.integers(0, 3))]
        n = int(rng.integers(1, 7))
        m = random_invertible(n, field, rng)
        ident = FieldMatrix.identity(n, field)
        assert (m @ mat_inv(m)) == ident
        assert (mat_inv(m) @ m) == ident


def test_mat_inv_rejects_singular():
    field = make_field(7)
    m = FieldMatrix.from_rows([[1, 2], [2, 4]], field)
    with pytest.raises(SingularMatrixError):
        mat_inv(m)
    assert not is_invertible(m)


def test_extend_to_basis():
    rng = np.random.default_rng(18)
    for _ in range(60):
        field = FIELDS[int(rng.integers(0, 3))]
        n = int(rng.integers(1, 7))
        k = int(rng.integers(0, n + 1))
        square = random_invertible(n, field, rng)
        cols = FieldMatrix(square.data[:, :k].copy(), field)
        extra = extend_to_basis(cols)
        assert extra.shape == (n, n - k)
        full = FieldMatrix(np.hstack([cols.data, extra.data]), field)
        assert is_invertible(full)


def test_matmul_shape_mismatch():
    field = make_field(7)
    a = FieldMatrix.zeros(2, 3, field)
    b = FieldMatrix.zeros(2, 3, field)
    with pytest.raises(ShapeMismatchError):
        a @ b


def test_matrix_algebra_basics():
    field = make_field(1009)
    a = FieldMatrix.from_rows([[1, 2], [3, 4]], field)
    b = FieldMatrix.from_rows([[5, 6], [7, 8]], field)
    assert (a + b) - b == a
    assert a.scale(0).is_zero()
    assert (a @ FieldMatrix.identity(2, field)) == a
    assert a.transpose().transpose() == a
