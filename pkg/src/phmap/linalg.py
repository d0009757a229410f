"""Dense exact linear algebra over Z/pZ.

Matrices wrap int64 numpy arrays with entries reduced mod p.  Everything
here is deterministic: pivots are chosen as the first nonzero entry
scanning top-to-bottom within a column, columns left-to-right.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ModulusMismatchError,
    NoSolutionError,
    ShapeMismatchError,
    SingularMatrixError,
)
from .ffield import FieldContext

# Above this modulus an int64 matmul could overflow for wide products, so
# fall back to object-dtype exact arithmetic.
_FAST_MODULUS_LIMIT = 1 << 21


class FieldMatrix:
    """Immutable-by-convention dense matrix over a prime field."""

    __slots__ = ("data", "field")

    def __init__(self, data: np.ndarray, field: FieldContext):
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"expected 2-d data, got ndim={arr.ndim}")
        self.data = np.mod(arr.astype(np.int64, copy=True), field.p)
        self.field = field

    @classmethod
    def from_rows(cls, rows, field: FieldContext) -> "FieldMatrix":
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        return cls(arr, field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: FieldContext) -> "FieldMatrix":
        return cls(np.zeros((nrows, ncols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field: FieldContext) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), field)

    @property
    def shape(self):
        return self.data.shape

    def copy(self) -> "FieldMatrix":
        return FieldMatrix(self.data.copy(), self.field)

    def _check_field(self, other: "FieldMatrix") -> None:
        if self.field.p != other.field.p:
            raise ModulusMismatchError(
                f"mixed moduli {self.field.p} and {other.field.p}"
            )

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        if p <= _FAST_MODULUS_LIMIT:
            prod = (self.data @ other.data) % p
        else:
            prod = np.dot(self.data.astype(object), other.data.astype(object)) % p
            prod = prod.astype(np.int64)
        return FieldMatrix(prod, self.field)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shape mismatch {self.shape} vs {other.shape}")
        return FieldMatrix((self.data + other.data) % self.field.p, self.field)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shape mismatch {self.shape} vs {other.shape}")
        return FieldMatrix((self.data - other.data) % self.field.p, self.field)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix((self.data * (c % self.field.p)) % self.field.p, self.field)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.data.T.copy(), self.field)

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.field.p == other.field.p
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self):
        return f"FieldMatrix(p={self.field.p},\n{self.data})"

    def is_zero(self) -> bool:
        return not self.data.any()


@dataclass
class TrackedReduction:
    """Outcome of a Smith reduction: row_transform @ original @ col_transform == result."""

    result: FieldMatrix
    row_transform: FieldMatrix
    col_transform: FieldMatrix
    rank: int


def smith_normal_form(m: FieldMatrix) -> TrackedReduction:
    """Reduce to [[I_r, 0], [0, 0]] with invertible tracked transforms.

    Over a field the Smith form is just the rank-r identity block.  The
    transforms are accumulated by applying every row operation to an
    identity on the left and every column operation to one on the right.
    """
    field = m.field
    p = field.p
    a = m.data.copy()
    nrows, ncols = a.shape
    P = np.eye(nrows, dtype=np.int64)
    Q = np.eye(ncols, dtype=np.int64)
    r = 0
    while r < min(nrows, ncols):
        pivot = None
        for j in range(r, ncols):
            col = a[r:, j]
            nz = np.nonzero(col)[0]
            if nz.size:
                pivot = (r + int(nz[0]), j)
                break
        if pivot is None:
            break
        i, j = pivot
        if i != r:
            a[[r, i]] = a[[i, r]]
            P[[r, i]] = P[[i, r]]
        if j != r:
            a[:, [r, j]] = a[:, [j, r]]
            Q[:, [r, j]] = Q[:, [j, r]]
        inv = field.inv(int(a[r, r]))
        a[r] = (a[r] * inv) % p
        P[r] = (P[r] * inv) % p
        col = a[:, r].copy()
        col[r] = 0
        if col.any():
            a -= np.outer(col, a[r])
            a %= p
            P -= np.outer(col, P[r])
            P %= p
        row = a[r].copy()
        row[r] = 0
        if row.any():
            a -= np.outer(a[:, r], row)
            a %= p
            Q -= np.outer(Q[:, r], row)
            Q %= p
        r += 1
    return TrackedReduction(
        result=FieldMatrix(a, field),
        row_transform=FieldMatrix(P, field),
        col_transform=FieldMatrix(Q, field),
        rank=r,
    )


def rref(m: FieldMatrix):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    field = m.field
    p = field.p
    a = m.data.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for j in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(a[r:, j])[0]
        if not nz.size:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * field.inv(int(a[r, j]))) % p
        col = a[:, j].copy()
        col[r] = 0
        if col.any():
            a -= np.outer(col, a[r])
            a %= p
        pivots.append(j)
        r += 1
    return FieldMatrix(a, field), pivots


def rank(m: FieldMatrix) -> int:
    _, pivots = rref(m)
    return len(pivots)


def kernel_basis(m: FieldMatrix) -> FieldMatrix:
    """Columns spanning the null space; shape (ncols, nullity)."""
    field = m.field
    p = field.p
    red, pivots = rref(m)
    ncols = m.shape[1]
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, j in enumerate(free):
        basis[j, k] = 1
        for row_idx, pj in enumerate(pivots):
            basis[pj, k] = (-int(red.data[row_idx, j])) % p
    return FieldMatrix(basis, field)


def solve(m: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """One solution x of m @ x == b (free variables set to zero).

    b may carry several right-hand sides as columns.  Raises NoSolutionError
    when any column of b lies outside the image.
    """
    m._check_field(b)
    if b.shape[0] != m.shape[0]:
        raise ShapeMismatchError(f"rhs rows {b.shape[0]} != matrix rows {m.shape[0]}")
    ncols = m.shape[1]
    aug = FieldMatrix(np.hstack([m.data, b.data]), m.field)
    red, pivots = rref(aug)
    if any(j >= ncols for j in pivots):
        raise NoSolutionError("right-hand side not in the image")
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for row_idx, pj in enumerate(pivots):
        x[pj] = red.data[row_idx, ncols:]
    return FieldMatrix(x, m.field)


def mat_inv(m: FieldMatrix) -> FieldMatrix:
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"cannot invert non-square {m.shape}")
    n = m.shape[0]
    aug = FieldMatrix(np.hstack([m.data, np.eye(n, dtype=np.int64)]), m.field)
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return FieldMatrix(red.data[:, n:], m.field)


def is_invertible(m: FieldMatrix) -> bool:
    return m.shape[0] == m.shape[1] and rank(m) == m.shape[0]


def random_matrix(nrows: int, ncols: int, field: FieldContext, rng) -> FieldMatrix:
    return FieldMatrix(rng.integers(0, field.p, size=(nrows, ncols)), field)


def random_invertible(n: int, field: FieldContext, rng) -> FieldMatrix:
    if n == 0:
        return FieldMatrix.zeros(0, 0, field)
    while True:
        m = random_matrix(n, n, field, rng)
        if is_invertible(m):
            return m


def extend_to_basis(cols: FieldMatrix) -> FieldMatrix:
    """Standard basis vectors completing the given independent columns."""
    n = cols.shape[0]
    work = FieldMatrix(
        np.hstack([cols.data, np.eye(n, dtype=np.int64)]), cols.field
    )
    _, pivots = rref(work)
    extra = [j - cols.shape[1] for j in pivots if j >= cols.shape[1]]
    out = np.zeros((n, len(extra)), dtype=np.int64)
    for k, e in enumerate(extra):
        out[e, k] = 1
    return FieldMatrix(out, cols.field)
