"""Ye-Barg MSR array codes with optimal-bandwidth single node repair.

Row ``a`` (base-``b`` digits ``a_0 .. a_{n-1}``, least significant first) is the
Reed-Solomon code whose locator at column ``j`` is ``betas[a_j, j]``.  Rows that
differ only in digit ``a_i`` share every locator except the one at column ``i``,
which is what makes cheap repair of node ``i`` possible.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .arrays import ArrayCode, ArrayCodeword, RepairTranscript, cut_set_bound, row_digits
from .errors import DuplicateLocatorError, FieldTooSmallError, InvalidParametersError, RepairError
from .gf import GaloisField
from .matrix import batched_solve, vandermonde_array
from .mds import rs_code, LinearCode


def default_betas(field: GaloisField, b: int, n: int, beta: Optional[int] = None) -> np.ndarray:
    """Locator table ``betas[digit, column] = beta**(column + digit*n)``.

    ``beta`` defaults to the field's primitive element.  When ``b*n`` equals the
    field size the powers alone run out, and the last entry is set to 0.
    """
    if beta is None:
        beta = field.generator
    count = b * n
    if count > field.order:
        raise FieldTooSmallError(f"need {count} distinct locators, field has {field.order}")
    exps = np.arange(n)[None, :] + n * np.arange(b)[:, None]
    table = np.array([[field.power(beta, int(e)) for e in row] for row in exps], dtype=np.int64)
    if count == field.order:
        table[b - 1, n - 1] = 0
    return table


class YeBargCode(ArrayCode):
    """``(n, n - r)`` MSR code repairing any node from ``d`` helpers.

    Attributes:
        b: ``d + 1 - n + r``, the number of rows summed into one helper symbol.
        betas: ``b x n`` table of distinct locators.
    """

    kind = "yebarg"

    def __init__(self, field: GaloisField, n: int, r: int, d: int, betas=None):
        if not 1 <= r < n:
            raise InvalidParametersError(f"need 1 <= r < n, got r={r}, n={n}")
        if not n - r <= d <= n - 1:
            raise InvalidParametersError(f"helper count d={d} outside [{n - r}, {n - 1}]")
        b = d + 1 - n + r
        if betas is None:
            betas = default_betas(field, b, n)
        betas = field.array(betas)
        if betas.shape != (b, n):
            raise InvalidParametersError(f"locator table must be {b}x{n}")
        if len(np.unique(betas)) != betas.size:
            raise DuplicateLocatorError("Ye-Barg locators must be distinct")
        self.field = field
        self.mu = 1
        self.n = n
        self.r = r
        self.s = 0
        self.d = d
        self.b = b
        self.ell = b**n
        self.betas = betas

    def row_locators(self, rows) -> np.ndarray:
        """Locators of the given rows, shape ``(len(rows), n)``."""
        dig = row_digits(rows, self.b, self.n)
        return self.betas[dig, np.arange(self.n)]

    def parity_stack(self, rows=None) -> np.ndarray:
        if rows is None:
            rows = np.arange(self.ell)
        locs = self.row_locators(rows)
        return np.stack([self.field.power(locs, t) for t in range(self.r)], axis=1)

    def row_code(self, a: int) -> LinearCode:
        if not 0 <= a < self.ell:
            raise InvalidParametersError(f"row {a} outside [0, {self.ell})")
        return rs_code(self.field, self.row_locators(np.array([a]))[0], self.n - self.r)

    def descriptor(self) -> dict:
        out = super().descriptor()
        out.update(d=self.d, betas=self.betas.tolist())
        return out

    def local_array_code(self) -> "YeBargCode":
        return self

    def repair_local(self, word, failed: int, helpers=None):
        return repair_node(self, word, failed, helpers)

    def repair_groups(self, i: int) -> np.ndarray:
        """Rows grouped by all digits except ``a_i``: shape ``(ell/b, b)``."""
        stride = self.b**i
        all_rows = np.arange(self.ell)
        base = all_rows[row_digits(all_rows, self.b, self.n)[:, i] == 0]
        return base[:, None] + stride * np.arange(self.b)[None, :]


def build_yebarg(field: GaloisField, n: int, r: int, d: int, betas=None) -> YeBargCode:
    return YeBargCode(field, n, r, d, betas)


def _check_helpers(n, d, failed, helpers):
    if not 0 <= failed < n:
        raise RepairError(f"node {failed} outside [0, {n})")
    if helpers is None:
        helpers = [j for j in range(n) if j != failed][:d]
    helpers = sorted(int(h) for h in helpers)
    if failed in helpers:
        raise RepairError("the failed node cannot be a helper")
    if len(helpers) != d or len(set(helpers)) != d:
        raise RepairError(f"need exactly {d} distinct helpers, got {helpers}")
    if any(not 0 <= h < n for h in helpers):
        raise RepairError(f"helper outside [0, {n})")
    return helpers


def repair_node(code: YeBargCode, word, failed: int, helpers: Optional[Sequence[int]] = None):
    """Rebuild column ``failed`` from ``d`` helpers, each sending ``ell/b`` symbols.

    For every group of ``b`` rows that differ only in digit ``a_i``, helper ``j``
    sends the sum of its entries over the group.  Summing the group's parity
    equations leaves ``r`` unknowns: the ``b`` lost entries and the sums of the
    ``n - 1 - d`` silent nodes.  Their coefficient columns are Vandermonde
    columns on distinct locators, so the ``r x r`` system is solvable.

    Returns:
        ``(column, transcript)``.
    """
    field = code.field
    data = word.data if isinstance(word, ArrayCodeword) else np.asarray(word, dtype=np.int64)
    helpers = _check_helpers(code.n, code.d, failed, helpers)
    silent = [j for j in range(code.n) if j != failed and j not in helpers]
    groups = code.repair_groups(failed)  # (G, b)
    base = groups[:, 0]
    sums = {j: field.sum(data[groups, j], axis=1) for j in helpers}

    locs = code.row_locators(base)  # (G, n); column `failed` holds digit-0 locator
    powers = lambda x: np.stack([field.power(x, t) for t in range(code.r)], axis=-1)
    lost_cols = powers(np.broadcast_to(code.betas[:, failed], (len(base), code.b)))  # (G, b, r)
    silent_cols = powers(locs[:, silent])  # (G, n-1-d, r)
    system = np.concatenate([lost_cols, silent_cols], axis=1).transpose(0, 2, 1)  # (G, r, r)
    rhs = np.zeros((len(base), code.r), dtype=np.int64)
    for j in helpers:
        rhs = field.add(rhs, field.mul(powers(locs[:, j]), sums[j][:, None]))
    x, ok = batched_solve(field, system, field.neg(rhs))
    if not ok.all():
        raise RepairError("repair system is singular")
    column = np.zeros(code.ell, dtype=np.int64)
    column[groups] = x[:, :code.b]

    per = code.ell // code.b
    transcript = RepairTranscript(
        failed=[failed], helpers=helpers, per_helper={j: per for j in helpers},
        symbol_field=repr(field), bound=cut_set_bound(code.n, code.r, code.d, code.ell),
        payload=sums)
    return column, transcript


def naive_repair(code: ArrayCode, word, failed: int, helpers: Sequence[int]):
    """Repair by downloading every helper column in full and erasure decoding."""
    data = word.data if isinstance(word, ArrayCodeword) else np.asarray(word, dtype=np.int64)
    helpers = sorted(helpers)
    erased = [j for j in range(code.length) if j not in helpers]
    full = code.decode_erasures(ArrayCodeword(code.field, data), erased)
    transcript = RepairTranscript(
        failed=[failed], helpers=helpers, per_helper={j: code.ell for j in helpers},
        symbol_field=repr(code.field), bound=cut_set_bound(code.n, code.r, len(helpers), code.ell),
        regenerating=False)
    return full.data[:, failed].copy(), transcript
