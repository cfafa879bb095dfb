"""PMDS and SD array codes with two global parities and Ye-Barg local groups.

The scalar building block is a Blaum-type code on ``mu`` groups of ``n``
columns over GF(2^w).  Column ``xi`` carries an exponent ``L[xi]``; with
``beta`` of large enough order the parity checks are

* per group, ``r`` rows ``beta**(t * L[xi])`` for ``t < r``,
* two global rows: ``beta**(r * L[xi])`` and, in group ``j``,
  ``beta**(-j*N - L[xi])``.

The array code uses a different exponent set in each row, chosen so that
every group is a Ye-Barg code and therefore repairs single nodes at the
cut-set bound.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .arrays import ArrayCode, ArrayCodeword, ErasurePattern, RepairTranscript, row_digits
from .errors import FieldError, FieldTooSmallError, InvalidParametersError, RepairError
from .gf import GF, GaloisField
from .mds import LinearCode
from .yebarg import YeBargCode, naive_repair, repair_node

MODES = ("PMDS", "SD", "s1")


def validate_pmds_parameters(mu: int, n: int, r: int, s: int) -> None:
    if mu < 2 or n < 2 or not 1 <= r < n:
        raise InvalidParametersError(f"invalid parameters mu={mu}, n={n}, r={r}")
    if not 1 <= s <= (n - r) * (mu - 1):
        raise InvalidParametersError(f"s={s} outside [1, (n-r)(mu-1)]")


@lru_cache(maxsize=32)
def _power_table(field: GaloisField, beta: int) -> np.ndarray:
    order = field.element_order(beta)
    tab = np.empty(order, dtype=np.int64)
    x = 1
    for i in range(order):
        tab[i] = x
        x = field.mul(x, beta)
    return tab


def beta_power(field: GaloisField, beta: int, exps) -> np.ndarray:
    """``beta**e`` for an integer array ``e``; negative exponents allowed."""
    tab = _power_table(field, int(beta))
    return tab[np.mod(np.asarray(exps, dtype=np.int64), len(tab))]


def blaum_parity(field: GaloisField, mu: int, n: int, r: int, exps, N: int, beta: int,
                 s: int = 2) -> np.ndarray:
    """Parity checks for one exponent set ``(n,)`` or a stack ``(R, n)``.

    Shape of the result: ``(mu*r + s, mu*n)``, with a leading ``R`` axis for
    stacked input.  ``s = 1`` keeps only the first global row.
    """
    exps = np.asarray(exps, dtype=np.int64)
    single = exps.ndim == 1
    if single:
        exps = exps[None]
    h = np.zeros((exps.shape[0], mu * r + s, mu * n), dtype=np.int64)
    local = np.stack([beta_power(field, beta, t * exps) for t in range(r)], axis=1)
    for g in range(mu):
        cols = slice(g * n, (g + 1) * n)
        h[:, g * r:(g + 1) * r, cols] = local
        h[:, mu * r, cols] = beta_power(field, beta, r * exps)
        if s == 2:
            h[:, mu * r + 1, cols] = beta_power(field, beta, -g * N - exps)
    return h[0] if single else h


class BlaumRowCode(LinearCode):
    """The scalar ``[mu*n, mu*(n-r) - s]`` code on exponent set ``L``.

    ``pmds_guaranteed`` and ``sd_guaranteed`` record whether ``N`` clears the
    sufficient thresholds ``(r+1)(max L - r) + 1`` and ``max L + 1``.
    """

    def __init__(self, field: GaloisField, mu: int, n: int, r: int, L: Sequence[int], N: int,
                 beta: Optional[int] = None, s: int = 2):
        L = [int(x) for x in L]
        if len(L) != n or len(set(L)) != n or min(L) < 0:
            raise InvalidParametersError(f"exponent set must hold {n} distinct non-negative integers")
        if s not in (1, 2):
            raise InvalidParametersError("this code family supports s in {1, 2}")
        if beta is None:
            beta = field.generator
        if field.element_order(beta) < mu * N:
            raise FieldTooSmallError(f"order of beta is below mu*N = {mu * N}")
        self.mu, self.r, self.s = mu, r, s
        self.L = tuple(L)
        self.N = N
        self.beta = int(beta)
        self.pmds_guaranteed = N >= (r + 1) * (max(L) - r) + 1
        self.sd_guaranteed = N >= max(L) + 1
        super().__init__(field, blaum_parity(field, mu, n, r, L, N, self.beta, s))
        self.group_size = n


def blaum_row_code(field: GaloisField, mu: int, n: int, r: int, L: Sequence[int], N: int,
                   beta: Optional[int] = None, s: int = 2) -> BlaumRowCode:
    return BlaumRowCode(field, mu, n, r, L, N, beta, s)


def required_N(n: int, r: int, mode: str) -> int:
    if mode == "SD":
        return r * n
    return (r + 1) * (r * n - 1 - r) + 1


def required_field_size(mu: int, n: int, r: int, d: int, mode: str) -> int:
    """Smallest power of two strictly above ``max(mu*N, b*n)``."""
    b = d + 1 - n + r
    bound = max(mu * required_N(n, r, mode), b * n)
    q = 2
    while q <= bound:
        q *= 2
    return q


class LocalMsrPmds2Code(ArrayCode):
    """Array code whose rows are Blaum-type codes and whose groups are Ye-Barg codes.

    Row ``a`` uses exponents ``L^(a)[i] = i + a_i*n`` where ``a_i`` is the
    ``i``-th base-``b`` digit of ``a``.
    """

    kind = "pmds2"

    def __init__(self, field: GaloisField, mu: int, n: int, r: int, d: int, mode: str = "PMDS",
                 beta: Optional[int] = None):
        if mode not in MODES:
            raise InvalidParametersError(f"mode must be one of {MODES}")
        s = 1 if mode == "s1" else 2
        validate_pmds_parameters(mu, n, r, s)
        if not n - r <= d <= n - 1:
            raise InvalidParametersError(f"helper count d={d} outside [{n - r}, {n - 1}]")
        if field.p != 2:
            raise FieldError("this construction needs a field of characteristic 2")
        self.field = field
        self.mu, self.n, self.r, self.s, self.d = mu, n, r, s, d
        self.mode = mode
        self.b = d + 1 - n + r
        self.ell = self.b**n
        self.N = required_N(n, r, mode)
        if field.order <= max(mu * self.N, self.b * n):
            raise FieldTooSmallError(
                f"need q > max(mu*N, b*n) = {max(mu * self.N, self.b * n)}, got {field.order}")
        self.beta = field.generator if beta is None else int(beta)
        if field.element_order(self.beta) < max(mu * self.N, self.b * n):
            raise FieldTooSmallError("order of beta is too small")
        exps = np.arange(n)[None, :] + n * np.arange(self.b)[:, None]
        self.local_code = YeBargCode(field, n, r, d, betas=beta_power(field, self.beta, exps))

    def row_exponents(self, rows) -> np.ndarray:
        dig = row_digits(rows, self.b, self.n)
        return np.arange(self.n)[None, :] + self.n * dig

    def parity_stack(self, rows=None) -> np.ndarray:
        if rows is None:
            rows = np.arange(self.ell)
        return blaum_parity(self.field, self.mu, self.n, self.r, self.row_exponents(rows),
                            self.N, self.beta, self.s)

    def row_code(self, a: int) -> BlaumRowCode:
        return BlaumRowCode(self.field, self.mu, self.n, self.r, self.row_exponents(np.array([a]))[0],
                            self.N, self.beta, self.s)

    def local_array_code(self) -> YeBargCode:
        return self.local_code

    def repair_local(self, word, failed: int, helpers=None):
        return local_repair(self, word, failed, helpers)

    @property
    def pmds_guaranteed(self) -> bool:
        return self.mode in ("PMDS", "s1")

    def descriptor(self) -> dict:
        out = super().descriptor()
        out.update(mode=self.mode, d=self.d, N=self.N, w=self.field.m, beta=self.beta)
        return out


def build_pmds2(mu: int, n: int, r: int, d: int, mode: str = "PMDS",
                field: Optional[GaloisField] = None) -> LocalMsrPmds2Code:
    """Build the code over the smallest admissible GF(2^w) unless ``field`` is given."""
    if field is None:
        if mode not in MODES:
            raise InvalidParametersError(f"mode must be one of {MODES}")
        q = required_field_size(mu, n, r, d, "PMDS" if mode == "s1" else mode)
        field = GF(2, q.bit_length() - 1)
    return LocalMsrPmds2Code(field, mu, n, r, d, mode)


def local_repair(code, word, failed: int, helpers: Optional[Sequence[int]] = None,
                 available: Optional[Sequence[int]] = None):
    """Repair column ``failed`` (a global index) inside its own group.

    With ``d`` helpers in the group the Ye-Barg repair runs at the cut-set
    bound.  If ``available`` lists the surviving columns and fewer than ``d``
    of them lie in the group, the group is erasure decoded from ``n - r``
    survivors instead and the transcript is marked non-regenerating.
    """
    data = word.data if isinstance(word, ArrayCodeword) else np.asarray(word, dtype=np.int64)
    g = code.group_of(failed)
    cols = code.group(g)
    local = code.local_code
    offset = cols[0]
    sub = data[:, cols]
    if helpers is None and available is not None:
        alive = [c - offset for c in available if c in cols and c != failed]
        if len(alive) < code.n - code.r:
            raise RepairError(f"only {len(alive)} survivors in group {g}; at least {code.n - code.r} needed")
        if len(alive) < local.d:
            column, tr = naive_repair(local, sub, failed - offset, alive[:code.n - code.r])
            return column, _shift(tr, offset)
        helpers = [c + offset for c in alive[:local.d]]
    loc_helpers = None if helpers is None else [h - offset for h in helpers]
    if loc_helpers is not None and any(not 0 <= h < code.n for h in loc_helpers):
        raise RepairError("helpers must lie in the failed node's group")
    column, tr = repair_node(local, sub, failed - offset, loc_helpers)
    return column, _shift(tr, offset)


def _shift(tr: RepairTranscript, offset: int) -> RepairTranscript:
    return RepairTranscript(
        failed=[f + offset for f in tr.failed], helpers=[h + offset for h in tr.helpers],
        per_helper={h + offset: c for h, c in tr.per_helper.items()}, symbol_field=tr.symbol_field,
        bound=tr.bound, regenerating=tr.regenerating,
        payload={h + offset: v for h, v in tr.payload.items()})


def global_decode(code: ArrayCode, word, pattern) -> ArrayCodeword:
    """Erasure decode every row; ``pattern`` is an ErasurePattern or a column list."""
    cols = pattern.columns() if isinstance(pattern, ErasurePattern) else list(pattern)
    if not isinstance(word, ArrayCodeword):
        word = ArrayCodeword(code.field, word)
    return code.decode_erasures(word, cols)
