"""Dense linear algebra over a :class:`~pmds_regen.gf.GaloisField`.

Most functions take ``(field, array)`` and work on plain int64 arrays.  The
``batched_*`` variants run Gauss-Jordan elimination on a whole stack of
matrices at once, which is what the exhaustive certifiers lean on.
``CodeMatrix`` bundles a field with a 2-D array for the public API.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from .errors import (DimensionMismatchError, MixedFieldsError, NoSolutionError,
                     SingularMatrixError, UnderdeterminedError)
from .gf import GaloisField


def batched_rref(field: GaloisField, mats, ncols: Optional[int] = None):
    """Reduced row echelon form of every matrix in a stack.

    Only the first ``ncols`` columns are used for pivoting (the rest ride
    along, as in an augmented system).  Pivots are the first nonzero entry
    in column order.

    Returns:
        ``(reduced, pivots, rank)`` where ``pivots`` is a boolean array of
        shape ``(B, ncols)`` marking pivot columns and ``rank`` has shape ``(B,)``.
    """
    a = np.array(mats, dtype=np.int64, copy=True)
    if a.ndim == 2:
        a = a[None]
    nb, nr, nc = a.shape
    if ncols is None:
        ncols = nc
    prow = np.zeros(nb, dtype=np.int64)
    pivots = np.zeros((nb, ncols), dtype=bool)
    rows = np.arange(nr)
    for col in range(ncols):
        eligible = (a[:, :, col] != 0) & (rows[None, :] >= prow[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = eligible[sel].argmax(axis=1)
        top = prow[sel]
        sub = a[sel, :, col:]
        r_top = sub[np.arange(len(sel)), top].copy()
        r_piv = sub[np.arange(len(sel)), piv].copy()
        sub[np.arange(len(sel)), piv] = r_top
        inv = field.inv(r_piv[:, 0])
        prow_vals = field.mul(r_piv, inv[:, None])
        sub[np.arange(len(sel)), top] = prow_vals
        factors = sub[:, :, 0].copy()
        factors[np.arange(len(sel)), top] = 0
        sub = field.sub(sub, field.mul(factors[:, :, None], prow_vals[:, None, :]))
        a[sel, :, col:] = sub
        pivots[sel, col] = True
        prow[sel] += 1
    return a, pivots, prow


def batched_rank(field: GaloisField, mats) -> np.ndarray:
    return batched_rref(field, mats)[2]


def batched_is_invertible(field: GaloisField, mats) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    if mats.shape[-1] != mats.shape[-2]:
        raise DimensionMismatchError("square matrices required")
    return batched_rank(field, mats) == mats.shape[-1]


def batched_solve(field: GaloisField, mats, rhs):
    """Solve ``A_b x_b = y_b`` for a stack of square systems.

    ``rhs`` has shape ``(B, n)`` or ``(B, n, k)``.  Returns ``(x, ok)``; rows of
    ``x`` where ``ok`` is false are meaningless.
    """
    a = np.asarray(mats, dtype=np.int64)
    y = np.asarray(rhs, dtype=np.int64)
    vec = y.ndim == 2
    if vec:
        y = y[..., None]
    n = a.shape[-1]
    if a.shape[-2] != n or y.shape[-2] != n:
        raise DimensionMismatchError("batched_solve needs square systems")
    red, _, rank = batched_rref(field, np.concatenate([a, y], axis=-1), ncols=n)
    x = red[:, :, n:]
    return (x[..., 0] if vec else x), rank == n


def batched_inverse(field: GaloisField, mats):
    a = np.asarray(mats, dtype=np.int64)
    n = a.shape[-1]
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), a.shape)
    return batched_solve(field, a, eye)


def rank_array(field: GaloisField, a) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return int(batched_rank(field, a[None])[0])


def rref_array(field: GaloisField, a):
    """Returns ``(reduced, pivot_columns)`` for a single matrix."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return a.copy(), []
    red, piv, _ = batched_rref(field, a[None])
    return red[0], list(np.nonzero(piv[0])[0])


def inverse_array(field: GaloisField, a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("inverse of a non-square matrix")
    if a.shape[0] == 0:
        return a.copy()
    x, ok = batched_inverse(field, a[None])
    if not ok[0]:
        raise SingularMatrixError("matrix is singular")
    return x[0]


def solve_array(field: GaloisField, a, b) -> np.ndarray:
    """Unique solution of ``a @ x = b`` for any shape of ``a``.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if a.ndim != 2 or b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(f"cannot solve {a.shape} against {b.shape}")
    nr, nc = a.shape
    red, piv = rref_array(field, np.concatenate([a, b], axis=1))
    piv = [c for c in piv if c < nc]
    rank = len(piv)
    if np.any(red[rank:, nc:]):
        raise NoSolutionError("inconsistent system")
    if rank < nc:
        raise UnderdeterminedError(f"solution space has dimension {nc - rank}")
    x = red[:nc, nc:]
    return x[:, 0] if vec else x


def null_space_array(field: GaloisField, a) -> np.ndarray:
    """Rows spanning ``{x : a @ x = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    nc = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(nc, dtype=np.int64)
    red, piv = rref_array(field, a)
    free = [c for c in range(nc) if c not in piv]
    basis = np.zeros((len(free), nc), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = field.neg(int(red[r, f]))
    return basis


def vandermonde_array(field: GaloisField, points, rows: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    return np.stack([field.power(pts, i) for i in range(rows)]) if rows else np.zeros((0, len(pts)), np.int64)


def moore_array(field: GaloisField, points, rows: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    out = [pts.copy()]
    for _ in range(1, rows):
        out.append(field.frobenius(out[-1], 1))
    return np.stack(out[:rows]) if rows else np.zeros((0, len(pts)), np.int64)


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


class CodeMatrix:
    """A dense matrix over a finite field."""

    def __init__(self, field: GaloisField, data):
        arr = field.array(data)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2:
            raise DimensionMismatchError("CodeMatrix needs 2-D data")
        self.field = field
        self.data = arr

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "CodeMatrix":
        return CodeMatrix(self.field, self.data.T)

    def _other(self, other):
        if isinstance(other, CodeMatrix):
            if other.field != self.field:
                raise MixedFieldsError("matrices over different fields")
            return other.data
        return np.asarray(other, dtype=np.int64)

    def __matmul__(self, other):
        res = self.field.matmul(self.data, self._other(other))
        return CodeMatrix(self.field, res) if isinstance(other, CodeMatrix) else res

    def __add__(self, other):
        return CodeMatrix(self.field, self.field.add(self.data, self._other(other)))

    def __sub__(self, other):
        return CodeMatrix(self.field, self.field.sub(self.data, self._other(other)))

    def __getitem__(self, idx):
        return CodeMatrix(self.field, self.data[idx])

    def __eq__(self, other):
        return (isinstance(other, CodeMatrix) and self.field == other.field
                and self.shape == other.shape and bool(np.all(self.data == other.data)))

    def __repr__(self):
        return f"CodeMatrix({self.field!r}, {self.data.tolist()})"

    def rank(self) -> int:
        return rank_array(self.field, self.data)

    def inverse(self) -> "CodeMatrix":
        return CodeMatrix(self.field, inverse_array(self.field, self.data))

    def solve(self, b):
        return solve_array(self.field, self.data, self._other(b))

    def null_space_basis(self) -> "CodeMatrix":
        return CodeMatrix(self.field, null_space_array(self.field, self.data))

    def rref(self) -> "CodeMatrix":
        return CodeMatrix(self.field, rref_array(self.field, self.data)[0])

    def to_json(self) -> str:
        return json.dumps({"field": self.field.descriptor(), "rows": self.rows,
                           "cols": self.cols, "data": self.data.ravel().tolist()})

    @classmethod
    def from_json(cls, text: str) -> "CodeMatrix":
        obj = json.loads(text)
        field = GaloisField.from_descriptor(obj["field"])
        data = np.array(obj["data"], dtype=np.int64).reshape(obj["rows"], obj["cols"])
        return cls(field, data)

    @classmethod
    def identity(cls, field: GaloisField, n: int) -> "CodeMatrix":
        return cls(field, np.eye(n, dtype=np.int64))


def rank(a: CodeMatrix) -> int:
    return a.rank()


def inverse(a: CodeMatrix) -> CodeMatrix:
    return a.inverse()


def solve(a: CodeMatrix, b):
    return a.solve(b)


def null_space_basis(a: CodeMatrix) -> CodeMatrix:
    return a.null_space_basis()


def vandermonde(field: GaloisField, points, rows: int) -> CodeMatrix:
    return CodeMatrix(field, vandermonde_array(field, points, rows))


def moore(field: GaloisField, points, rows: int) -> CodeMatrix:
    return CodeMatrix(field, moore_array(field, points, rows))
