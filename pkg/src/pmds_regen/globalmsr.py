"""PMDS codes whose global redundancy also repairs at the cut-set bound.

Row ``a`` of a codeword is ``u G_B^(a) diag(G_MDS, ..., G_MDS)``: a Gabidulin
codeword on the locators ``B[a, :]``, split into ``mu`` blocks of ``n - r``
symbols, each block encoded by a fixed ``[n, n-r]`` MDS code over GF(q).

Puncturing ``r`` columns in every group leaves, row by row, a Gabidulin code
on the transformed locators ``B[a, :] T^-T`` (``T`` is the block diagonal of
the surviving columns of ``G_MDS``).  If every column of that locator matrix
admits a grouping of rows (same locators elsewhere, GF(q)-independent
locators in the column), one lost node is rebuilt by downloading a single sum
per group from every other node.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arrays import ArrayCode, ArrayCodeword, RepairTranscript, cut_set_bound
from .errors import (DependentLocatorsError, DimensionMismatchError, FieldTooSmallError,
                     InvalidParametersError, NoGroupingError, RepairError)
from .gf import GaloisField
from .matrix import batched_rank, batched_solve, block_diag, inverse_array, vandermonde_array
from .mds import LinearCode, rs_code
from .pmds2 import validate_pmds_parameters

CACHE_ENTRIES = 1 << 25
SEARCH_STEPS = 10**6


def _moore_stack(field: GaloisField, locs: np.ndarray, s: int) -> np.ndarray:
    """Moore rows of every locator row: ``(R, L)`` in, ``(R, s, L)`` out."""
    out = [np.asarray(locs, dtype=np.int64)]
    for _ in range(1, s):
        out.append(field.frobenius(out[-1], 1))
    return np.stack(out[:s], axis=1)


def rows_independent(field: GaloisField, locs: np.ndarray) -> np.ndarray:
    """Whether each row of ``locs`` is linearly independent over GF(q)."""
    locs = np.asarray(locs, dtype=np.int64)
    if locs.shape[-1] > field.degree_over_subfield:
        return np.zeros(locs.shape[0], dtype=bool)
    coords = field.expand(locs)  # (R, L, M)
    out = np.empty(locs.shape[0], dtype=bool)
    step = 1 << 16
    for i in range(0, len(locs), step):
        out[i:i + step] = batched_rank(field.subfield, coords[i:i + step]) == locs.shape[1]
    return out


class SkewYeBargCode(ArrayCode):
    """Array code whose row ``a`` is the Gabidulin code with locators ``B[a, :]`` and redundancy ``s``."""

    kind = "skew-yebarg"

    def __init__(self, field: GaloisField, B, s: int):
        B = np.asarray(B, dtype=np.int64)
        if B.ndim != 2:
            raise DimensionMismatchError("locator matrix must be 2-D")
        ell, L = B.shape
        if not 1 <= s < L:
            raise InvalidParametersError(f"need 1 <= s < {L}, got s={s}")
        if L > field.degree_over_subfield:
            raise FieldTooSmallError(f"row length {L} exceeds the extension degree {field.degree_over_subfield}")
        ok = rows_independent(field, B)
        if not ok.all():
            a = int(np.argmin(ok))
            raise DependentLocatorsError(f"row {a} of B is dependent over GF({field.q})", row=a)
        self.field = field
        self.B = B
        self.mu, self.n, self.r, self.s = 1, L, s, 0
        self.ell = ell
        self.groupings: Dict[int, "GroupingTable"] = {}

    def parity_stack(self, rows=None) -> np.ndarray:
        if rows is None:
            rows = np.arange(self.ell)
        return _moore_stack(self.field, self.B[rows], self.r)

    def row_code(self, a: int) -> LinearCode:
        from .gabidulin import GabidulinCode
        return GabidulinCode(self.field, self.B[a], self.n - self.r)

    def descriptor(self) -> dict:
        out = super().descriptor()
        out.update(B_sha256=hashlib.sha256(self.B.tobytes()).hexdigest()[:16])
        return out


def build_skew_yebarg(field: GaloisField, B, s: int) -> SkewYeBargCode:
    return SkewYeBargCode(field, B, s)


@dataclass
class GroupingTable:
    """Rows of ``[0, ell)`` split into groups of ``s`` for repairing ``column``."""

    column: int
    groups: np.ndarray  # (ell/s, s) row indices

    def to_json(self) -> dict:
        return {"column": int(self.column), "groups": self.groups.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "GroupingTable":
        return cls(int(obj["column"]), np.array(obj["groups"], dtype=np.int64))


def _partition(allowed: set, size: int, s: int) -> Optional[List[Tuple[int, ...]]]:
    """Exact cover of ``range(size)`` by ``s``-subsets from ``allowed``; None if none exists."""
    by_first: Dict[int, List[Tuple[int, ...]]] = {}
    for sub in allowed:
        by_first.setdefault(sub[0], []).append(sub)
    steps = [0]

    def solve(free: frozenset):
        if not free:
            return []
        steps[0] += 1
        if steps[0] > SEARCH_STEPS:
            raise NoGroupingError("grouping search exceeded its step limit")
        first = min(free)
        for sub in by_first.get(first, ()):
            if all(x in free for x in sub):
                rest = solve(free.difference(sub))
                if rest is not None:
                    return [sub] + rest
        return None

    return solve(frozenset(range(size)))


def _class_partition(field: GaloisField, values: np.ndarray, s: int):
    """Partition sorted ``values`` into independent ``s``-subsets (positions), or None."""
    c = len(values)
    subs = np.array(list(itertools.combinations(range(c), s)), dtype=np.int64)
    coords = field.expand(values)[subs]  # (C, s, M)
    ok = batched_rank(field.subfield, coords) == s
    return _partition({tuple(x) for x in subs[ok].tolist()}, c, s)


def _row_ids(arr: np.ndarray, base: int) -> Tuple[np.ndarray, np.ndarray]:
    """``np.unique(arr, axis=0, return_inverse=True)``, via packed integer keys when they fit."""
    width = arr.shape[1]
    if width == 0:
        return arr[:1], np.zeros(len(arr), dtype=np.int64)
    if base**width < 2**62:
        keys = arr @ (base ** np.arange(width, dtype=np.int64))
        _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
        return arr[first], inv.reshape(-1)
    uniq, inv = np.unique(arr, axis=0, return_inverse=True)
    return uniq, inv.reshape(-1)


def find_grouping(field: GaloisField, B, column: int, s: int, pattern=None) -> GroupingTable:
    """Group rows for repairing ``column``.

    Rows are first split into classes that agree on every other column.
    Inside a class, column values are partitioned into ``s``-subsets that are
    GF(q)-independent, by exact backtracking.  Classes with the same value set
    share one search.
    """
    B = np.asarray(B, dtype=np.int64)
    ell, L = B.shape
    if s == 1:
        if np.any(B[:, column] == 0):
            raise NoGroupingError("a zero locator cannot form a group", column, pattern)
        return GroupingTable(column, np.arange(ell, dtype=np.int64)[:, None])
    others = np.delete(B, column, axis=1)
    _, cls = _row_ids(others, field.order)
    vals = B[:, column]
    order = np.lexsort((vals, cls))  # by class, then by value
    counts = np.bincount(cls)
    groups = []
    memo: Dict[bytes, Optional[np.ndarray]] = {}
    offsets = np.concatenate([[0], np.cumsum(counts)])
    for size in np.unique(counts):
        if size % s:
            raise NoGroupingError(f"a class of {size} rows is not divisible by {s}", column, pattern)
        ids = np.nonzero(counts == size)[0]
        rows = order[offsets[ids][:, None] + np.arange(size)[None, :]]  # (K, size)
        keys, which = _row_ids(vals[rows], field.order)
        for k, key in enumerate(keys):
            tag = key.tobytes()
            if tag not in memo:
                part = _class_partition(field, key, s)
                memo[tag] = None if part is None else np.array(part, dtype=np.int64)
            part = memo[tag]
            if part is None:
                raise NoGroupingError(f"values {key.tolist()} admit no independent partition", column, pattern)
            groups.append(rows[which == k][:, part].reshape(-1, s))
    return GroupingTable(column, np.concatenate(groups, axis=0))


def subspace_tuples(q_field: GaloisField, dim: int, k: int) -> np.ndarray:
    """All ordered ``k``-tuples of linearly independent vectors of GF(q)^dim.

    Returns shape ``(count, k, dim)``; ``count = prod_{t<k} (q^dim - q^t)``.
    """
    q = q_field.order
    vectors = np.array(list(itertools.product(range(q), repeat=dim)), dtype=np.int64)[:, ::-1]
    out = []

    def extend(prefix):
        if len(prefix) == k:
            out.append(list(prefix))
            return
        for v in range(1, len(vectors)):
            mat = vectors[prefix + [v]]
            if batched_rank(q_field, mat[None])[0] == len(prefix) + 1:
                extend(prefix + [v])

    extend([])
    return vectors[np.array(out, dtype=np.int64).reshape(-1, k)]


def build_grouping_matrix(field: GaloisField, mu: int, n: int, r: int, s: int) -> np.ndarray:
    """Locator matrix with the grouping property under any block-diagonal GF(q) scrambling.

    Block ``i`` of ``D = n - r + s - 1`` consecutive basis elements spans a
    subspace; the blocks intersect trivially.  Each row concatenates one
    ordered basis of an ``(n-r)``-dimensional subspace per block, and the rows
    run over all such choices, block 0 being the most significant.
    """
    k = n - r
    if k < 1 or s < 1 or mu < 1:
        raise InvalidParametersError(f"need n > r and s, mu >= 1")
    D = k + s - 1
    M = field.degree_over_subfield
    if M < mu * D:
        raise FieldTooSmallError(f"need M >= mu*(n-r+s-1) = {mu * D}, got M = {M}")
    tuples = subspace_tuples(field.subfield, D, k)  # (S, k, D)
    S = len(tuples)
    blocks = []
    for i in range(mu):
        coords = np.zeros((S, k, M), dtype=np.int64)
        coords[:, :, i * D:(i + 1) * D] = tuples
        blocks.append(field.combine(coords))  # (S, k)
    ell = S**mu
    idx = (np.arange(ell)[:, None] // (S ** np.arange(mu - 1, -1, -1))[None, :]) % S
    return np.concatenate([blocks[i][idx[:, i]] for i in range(mu)], axis=1)


class RepeatedRowCode(ArrayCode):
    """``ell`` rows of one scalar code; the local view of a group."""

    kind = "repeated"

    def __init__(self, field: GaloisField, H, ell: int):
        self.field = field
        self.H = np.asarray(H, dtype=np.int64)
        self.mu, self.n, self.r, self.s = 1, self.H.shape[1], self.H.shape[0], 0
        self.ell = ell

    def parity_stack(self, rows=None) -> np.ndarray:
        count = self.ell if rows is None else len(rows)
        return np.broadcast_to(self.H, (count,) + self.H.shape)


class GlobalMsrPmdsCode(ArrayCode):
    """PMDS array code with an inner ``[n, n-r]`` MDS code over GF(q) and locator matrix ``B``.

    Args:
        inner: the local code, over the standalone subfield.  Its canonical
            generator must be systematic on the first ``n - r`` positions.
        B: ``ell x mu(n-r)`` locators; every row GF(q)-independent.
    """

    kind = "global-msr"

    def __init__(self, field: GaloisField, mu: int, n: int, r: int, s: int, inner: LinearCode,
                 B=None):
        validate_pmds_parameters(mu, n, r, s)
        k = n - r
        if inner.field != field.subfield or inner.n != n or inner.k != k:
            raise InvalidParametersError(f"inner code must be an [{n}, {k}] code over {field.subfield!r}")
        if not np.array_equal(inner.G[:, :k], np.eye(k, dtype=np.int64)):
            raise InvalidParametersError("inner code is not systematic on its first n - r positions")
        self.from_subspaces = B is None
        if B is None:
            B = build_grouping_matrix(field, mu, n, r, s)
        B = np.asarray(B, dtype=np.int64)
        if B.ndim != 2 or B.shape[1] != mu * k:
            raise DimensionMismatchError(f"B must have {mu * k} columns")
        if B.shape[0] % s:
            raise InvalidParametersError(f"ell = {B.shape[0]} is not divisible by s = {s}")
        self.skew = SkewYeBargCode(field, B, s)
        self.field = field
        self.mu, self.n, self.r, self.s = mu, n, r, s
        self.inner = inner
        self.B = B
        self.ell = B.shape[0]
        self.G_mds = field.embed(inner.G)
        self.H_mds = field.embed(inner.H)
        self._stack = None
        self._punctured: Dict[tuple, SkewYeBargCode] = {}

    def _parity(self, rows) -> np.ndarray:
        mu, n, r, s, k = self.mu, self.n, self.r, self.s, self.n - self.r
        h = np.zeros((len(rows), mu * r + s, mu * n), dtype=np.int64)
        glob = _moore_stack(self.field, self.B[rows], s)  # (R, s, mu*k)
        for g in range(mu):
            h[:, g * r:(g + 1) * r, g * n:(g + 1) * n] = self.H_mds
            h[:, mu * r:, g * n:g * n + k] = glob[:, :, g * k:(g + 1) * k]
        return h

    def parity_stack(self, rows=None) -> np.ndarray:
        if rows is None:
            rows = np.arange(self.ell)
        rows = np.asarray(rows, dtype=np.int64)
        size = self.ell * (self.mu * self.r + self.s) * self.length
        if size <= CACHE_ENTRIES:
            if self._stack is None:
                self._stack = self._parity(np.arange(self.ell))
            return self._stack[rows]
        return self._parity(rows)

    def row_generators(self, rows=None) -> np.ndarray:
        """``G_B^(a) diag(G_MDS, ...)`` for each row, shape ``(R, mu(n-r) - s, mu n)``.

        ``G_B^(a)`` is the systematic-on-the-last-positions generator of the
        row's Gabidulin code, built from its Moore matrix independently of
        :meth:`parity_stack`.
        """
        if rows is None:
            rows = np.arange(self.ell)
        field, s = self.field, self.s
        L = self.mu * (self.n - self.r)
        moore = _moore_stack(field, self.B[rows], s)  # (R, s, L)
        m1_inv, ok = batched_solve(field, moore[:, :, :s],
                                   np.broadcast_to(np.eye(s, dtype=np.int64), (len(rows), s, s)))
        if not ok.all():
            raise DependentLocatorsError("a Moore block is singular", row=int(rows[np.argmin(ok)]))
        p = field.matmul(m1_inv, moore[:, :, s:])  # (R, s, L - s)
        gb = np.zeros((len(rows), L - s, L), dtype=np.int64)
        gb[:, :, :s] = field.neg(p.transpose(0, 2, 1))
        gb[:, :, s:] = np.eye(L - s, dtype=np.int64)
        diag = block_diag([self.G_mds] * self.mu)
        return field.matmul(gb, diag)

    def local_array_code(self) -> RepeatedRowCode:
        return RepeatedRowCode(self.field, self.H_mds, self.ell)

    def puncture_patterns(self):
        """All choices of ``r`` erased columns in every group (global indices)."""
        per_group = [list(itertools.combinations(self.group(g), self.r)) for g in range(self.mu)]
        return [tuple(p) for p in itertools.product(*per_group)]

    def punctured(self, pattern) -> SkewYeBargCode:
        key = tuple(tuple(sorted(int(c) for c in e)) for e in pattern)
        if key not in self._punctured:
            self._punctured[key] = puncture_and_certify_global(self, key)
        return self._punctured[key]

    def global_repair(self, word, pattern, node: int):
        """Rebuild ``node`` after the columns of ``pattern`` are punctured away."""
        data = word.data if isinstance(word, ArrayCodeword) else np.asarray(word, dtype=np.int64)
        erased = {int(c) for e in pattern for c in e}
        survivors = [c for c in range(self.length) if c not in erased]
        if node not in survivors:
            raise RepairError(f"node {node} is punctured by the pattern")
        skew = self.punctured(pattern)
        i = survivors.index(node)
        column, tr = global_repair(skew, skew.groupings[i], data[:, survivors], i)
        tr.failed = [node]
        tr.helpers = [survivors[j] for j in tr.helpers]
        tr.per_helper = {survivors[j]: v for j, v in tr.per_helper.items()}
        tr.payload = {survivors[j]: v for j, v in tr.payload.items()}
        return column, tr

    def descriptor(self) -> dict:
        out = super().descriptor()
        out.update(inner_H=self.inner.H.tolist())
        if self.from_subspaces:
            out["B"] = "subspace"
        else:
            out["B"] = self.B.tolist()
        return out


def default_inner_code(field: GaloisField, n: int, r: int) -> LinearCode:
    """Reed-Solomon ``[n, n-r]`` code over the subfield on locators ``0, 1, ..., n-1``.

    With ``n = q + 1`` the last column is the point at infinity (doubly extended RS).
    """
    sub = field.subfield
    if n > sub.order + 1:
        raise FieldTooSmallError(f"an [{n}, {n - r}] MDS code needs q >= {n - 1}")
    if n <= sub.order:
        return rs_code(sub, range(n), n - r)
    h = np.zeros((r, n), dtype=np.int64)
    h[:, :n - 1] = vandermonde_array(sub, np.arange(sub.order), r)
    h[r - 1, n - 1] = 1
    return LinearCode(sub, h)


def build_global_msr_pmds(field: GaloisField, mu: int, n: int, r: int, s: int,
                          inner: Optional[LinearCode] = None, B=None) -> GlobalMsrPmdsCode:
    if inner is None:
        inner = default_inner_code(field, n, r)
    return GlobalMsrPmdsCode(field, mu, n, r, s, inner, B)


def transform_matrix(code: GlobalMsrPmdsCode, pattern) -> np.ndarray:
    """``diag(G_MDS, ...)`` restricted to the surviving columns, over the subfield."""
    blocks = []
    for g, e in enumerate(pattern):
        local = [c - g * code.n for c in e]
        if len(set(local)) != code.r or any(not 0 <= c < code.n for c in local):
            raise InvalidParametersError(f"group {g} needs exactly {code.r} erased columns, got {list(e)}")
        keep = [c for c in range(code.n) if c not in local]
        blocks.append(code.inner.G[:, keep])
    if len(blocks) != code.mu:
        raise InvalidParametersError(f"pattern must list {code.mu} groups")
    return block_diag(blocks)


def puncture_and_certify_global(code: GlobalMsrPmdsCode, pattern) -> SkewYeBargCode:
    """Punctured code as a skew Ye-Barg code, with groupings for every column.

    Checks, for every row, that the Moore matrix of the transformed locators
    annihilates the restricted row generator (so the punctured row code is
    exactly that Gabidulin code), then searches a grouping per column.
    """
    field = code.field
    T = transform_matrix(code, pattern)
    T_inv = inverse_array(field.subfield, T)
    new_B = field.matmul(code.B, field.embed(T_inv.T))
    skew = SkewYeBargCode(field, new_B, code.s)

    erased = {int(c) for e in pattern for c in e}
    survivors = [c for c in range(code.length) if c not in erased]
    step = 1 << 15
    for start in range(0, code.ell, step):
        rows = np.arange(start, min(start + step, code.ell))
        gen = code.row_generators(rows)[:, :, survivors]
        prod = field.matmul(skew.parity_stack(rows), gen.transpose(0, 2, 1))
        if np.any(prod):
            bad = int(rows[np.argwhere(prod)[0][0]])
            raise DependentLocatorsError(f"row {bad}: punctured code differs from the predicted Gabidulin code",
                                         row=bad)
    for i in range(skew.n):
        skew.groupings[i] = find_grouping(field, new_B, i, code.s, pattern=pattern)
    return skew


def global_repair(skew: SkewYeBargCode, grouping: GroupingTable, codeword, failed: int):
    """Rebuild column ``failed`` of a skew Ye-Barg codeword from all other columns.

    Each helper sends one sum per group.  Summing the parity equations over a
    group leaves ``s`` unknowns with Moore coefficient columns on independent
    locators, an invertible ``s x s`` system.
    """
    field, s = skew.field, skew.r
    data = codeword.data if isinstance(codeword, ArrayCodeword) else np.asarray(codeword, dtype=np.int64)
    if grouping.column != failed:
        raise RepairError(f"grouping is for column {grouping.column}, not {failed}")
    G = grouping.groups
    L = skew.n
    helpers = [j for j in range(L) if j != failed]
    locs = skew.B[G]  # (Z, s, L)
    if np.any(locs[:, :, helpers] != locs[:, :1, helpers]):
        raise RepairError("grouped rows disagree outside the failed column")
    sums = {j: field.sum(data[G, j], axis=1) for j in helpers}
    moore_h = _moore_stack(field, locs[:, 0, :], s)  # (Z, s, L)
    rhs = np.zeros((len(G), s), dtype=np.int64)
    for j in helpers:
        rhs = field.add(rhs, field.mul(moore_h[:, :, j], sums[j][:, None]))
    system = _moore_stack(field, locs[:, :, failed], s)  # (Z, s, s): [t, u]
    x, ok = batched_solve(field, system, field.neg(rhs))
    if not ok.all():
        raise RepairError("a group's locators are dependent")
    column = np.zeros(skew.ell, dtype=np.int64)
    column[G] = x
    per = skew.ell // s
    transcript = RepairTranscript(
        failed=[failed], helpers=helpers, per_helper={j: per for j in helpers},
        symbol_field=repr(field), bound=cut_set_bound(L, s, L - 1, skew.ell), payload=sums)
    return column, transcript
