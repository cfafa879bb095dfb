"""Universal PMDS families: any local MDS code over GF(q) in, a PMDS code over GF(q^M) out.

Two families are provided.

``gabidulin``
    A fixed Gabidulin code of length ``mu*(n-r)`` supplies the global
    redundancy.  A codeword of it is split into ``mu`` blocks of ``n-r``
    symbols and each block is encoded with the local code's systematic
    generator.
``gabrys``
    Parity checks ``[diag(H_L, ..., H_L); H^(1) ... H^(mu)]`` where ``H^(j)``
    holds the first ``s`` Frobenius powers of fixed elements ``alpha[j, :]``
    such that any ``(r+1)*s`` of them are independent over GF(q).

Combining either family with a Ye-Barg code row by row gives an array code
whose groups are, after expanding GF(q^M) into ``M`` coordinates, ``M``
parallel Ye-Barg codewords, so single nodes repair at the cut-set bound.
"""

from __future__ import annotations

import itertools
import json
import math
from typing import Optional, Sequence

import numpy as np

from .arrays import ArrayCode, ArrayCodeword, RepairTranscript, cut_set_bound
from .errors import (DimensionMismatchError, FieldTooSmallError, InvalidParametersError,
                     SearchExhaustedError)
from .gabidulin import GabidulinCode, default_locators
from .gf import GaloisField
from .matrix import batched_rank, block_diag, moore_array, rank_array, vandermonde_array
from .mds import LinearCode, certify_mds
from .pmds2 import validate_pmds_parameters
from .yebarg import YeBargCode, repair_node

EXHAUSTIVE_LIMIT = 10**5
SAMPLE_SIZE = 10**4


def independent_subsets(field: GaloisField, elems, size: int, subsets=None) -> np.ndarray:
    """For each ``size``-subset (all, or the given index array), whether it is GF(q)-independent."""
    elems = np.asarray(elems, dtype=np.int64)
    if subsets is None:
        subsets = np.array(list(itertools.combinations(range(len(elems)), size)), dtype=np.int64)
    subsets = np.asarray(subsets, dtype=np.int64).reshape(-1, size)
    if size > field.degree_over_subfield:
        return np.zeros(len(subsets), dtype=bool)
    coords = field.expand(elems)  # (len, M) over the standalone subfield
    mats = coords[subsets]  # (B, size, M)
    out = np.empty(len(subsets), dtype=bool)
    step = 1 << 16
    for i in range(0, len(subsets), step):
        out[i:i + step] = batched_rank(field.subfield, mats[i:i + step]) == size
    return out


class UniversalFamily:
    """A map from ``[n, n-r]`` MDS codes over GF(q) to PMDS codes over GF(q^M).

    Args:
        kind: ``"gabidulin"`` or ``"gabrys"``.
        field: GF(q^M) with designated subfield GF(q).
        locators: for ``gabidulin``, the Gabidulin locators (default: polynomial basis).
        alphas: for ``gabrys``, a ``mu x n`` array of field elements.
    """

    def __init__(self, kind: str, field: GaloisField, mu: int, n: int, r: int, s: int,
                 locators=None, alphas=None, seed: int = 0):
        validate_pmds_parameters(mu, n, r, s)
        self.kind = kind
        self.field = field
        self.mu, self.n, self.r, self.s = mu, n, r, s
        self.verification = "none"
        M = field.degree_over_subfield
        if kind == "gabidulin":
            length = mu * (n - r)
            if M < length:
                raise FieldTooSmallError(f"need M >= mu*(n-r) = {length}, got M = {M}")
            if locators is None:
                locators = default_locators(field, length)
            self.gabidulin = GabidulinCode(field, locators, length - s)
            self.alphas = None
            self.verification = "exhaustive"
        elif kind == "gabrys":
            if alphas is None:
                alphas = find_alpha_set(field, mu, n, r, s, seed=seed)
            alphas = np.asarray(alphas, dtype=np.int64).reshape(mu, n)
            if len(np.unique(alphas)) != alphas.size:
                raise InvalidParametersError("alpha elements must be distinct")
            self.verification = verify_alpha_set(field, alphas.ravel(), (r + 1) * s, seed=seed)
            self.alphas = alphas
            self.gabidulin = None
        else:
            raise InvalidParametersError(f"unknown family {kind!r}")

    @property
    def global_rows(self) -> np.ndarray:
        """The ``s`` extra parity rows (Gabrys) or the Gabidulin parity checks."""
        if self.kind == "gabrys":
            return np.concatenate([moore_array(self.field, self.alphas[j], self.s)
                                   for j in range(self.mu)], axis=1)
        return self.gabidulin.H

    def parity_stack(self, local_checks) -> np.ndarray:
        """Parity checks of ``F(L)`` for a stack of local parity checks over the subfield.

        ``local_checks`` has shape ``(R, r, n)`` (standalone subfield integers);
        the result has shape ``(R, mu*r + s, mu*n)`` over the big field.
        Local codes must have their first ``n - r`` positions as an
        information set, which holds for every MDS code.
        """
        field = self.field
        hl = field.embed(np.asarray(local_checks, dtype=np.int64))
        R, r, n = hl.shape
        mu, s, k = self.mu, self.s, n - r
        h = np.zeros((R, mu * r + s, mu * n), dtype=np.int64)
        for g in range(mu):
            h[:, g * r:(g + 1) * r, g * n:(g + 1) * n] = hl
        glob = self.global_rows
        if self.kind == "gabrys":
            h[:, mu * r:, :] = glob
        else:
            # Gabidulin constraint on the systematic part of every block
            for g in range(mu):
                h[:, mu * r:, g * n:g * n + k] = glob[:, g * k:(g + 1) * k]
        return h

    def descriptor(self) -> dict:
        out = {"family": self.kind, "field": self.field.descriptor(), "mu": self.mu, "n": self.n,
               "r": self.r, "s": self.s, "verification": self.verification}
        if self.kind == "gabidulin":
            out["locators"] = self.gabidulin.locators.tolist()
        else:
            out["alphas"] = self.alphas.tolist()
        return out


def verify_alpha_set(field: GaloisField, alphas, size: int, seed: int = 0) -> str:
    """Check that every ``size``-subset is GF(q)-independent.

    Exhaustive up to ``EXHAUSTIVE_LIMIT`` subsets, otherwise a seeded sample of
    ``SAMPLE_SIZE``.  Returns the mode used; raises if a dependent subset is seen.
    """
    alphas = np.asarray(alphas, dtype=np.int64)
    total = math.comb(len(alphas), size)
    if total <= EXHAUSTIVE_LIMIT:
        ok = independent_subsets(field, alphas, size)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        subs = np.array([np.sort(rng.choice(len(alphas), size, replace=False)) for _ in range(SAMPLE_SIZE)])
        ok = independent_subsets(field, alphas, size, subs)
        mode = "sampled"
    if not ok.all():
        raise InvalidParametersError(f"alpha set has a GF(q)-dependent {size}-subset")
    return mode


def find_alpha_set(field: GaloisField, mu: int, n: int, r: int, s: int, strategy: str = "greedy",
                   seed: int = 0, max_steps: int = 20000) -> np.ndarray:
    """``mu*n`` elements of GF(q^M), any ``(r+1)*s`` of them GF(q)-independent.

    ``greedy`` adds random candidates that keep every subset independent and
    backtracks when stuck.  ``basis`` returns polynomial-basis elements, valid
    whenever ``mu*n <= M``.  ``code`` takes the columns of a Vandermonde
    parity-check matrix over GF(q), which works when ``mu*n <= q``.
    """
    total = mu * n
    t = (r + 1) * s
    M = field.degree_over_subfield
    if t > M:
        raise SearchExhaustedError(f"{t} elements cannot be independent in dimension {M}")
    if strategy == "basis":
        if total > M:
            raise SearchExhaustedError(f"{total} elements exceed the degree {M}")
        return default_locators(field, total).reshape(mu, n)
    if strategy == "code":
        q = field.q
        if total > q:
            raise SearchExhaustedError(f"no Vandermonde code of length {total} over GF({q})")
        small = field.subfield
        locs = np.arange(total, dtype=np.int64)
        h = vandermonde_array(small, locs, M)  # any M columns independent
        return field.combine(h.T).reshape(mu, n)
    if strategy != "greedy":
        raise InvalidParametersError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(seed)
    chosen: list = []
    stuck = 0
    for _ in range(max_steps):
        if len(chosen) == total:
            return np.array(chosen, dtype=np.int64).reshape(mu, n)
        cand = int(field.random((), rng=rng, nonzero=True))
        if cand in chosen:
            continue
        if _extends(field, chosen, cand, t):
            chosen.append(cand)
            stuck = 0
            continue
        stuck += 1
        if stuck > 200 and chosen:
            chosen.pop()
            stuck = 0
    raise SearchExhaustedError("no alpha set found within the step budget")


def _extends(field, chosen, cand, t):
    if len(chosen) < t:
        return field.linearly_independent_over_subfield(chosen + [cand])
    elems = np.array(chosen + [cand], dtype=np.int64)
    last = len(chosen)
    subs = np.array([c + (last,) for c in itertools.combinations(range(last), t - 1)], dtype=np.int64)
    return bool(independent_subsets(field, elems, t, subs).all())


def family_code(family: UniversalFamily, local: LinearCode) -> LinearCode:
    """The scalar code ``F(local)`` over the big field."""
    _check_local(family, local)
    return LinearCode(family.field, family.parity_stack(local.H[None])[0])


def _check_local(family, local):
    if local.field != family.field.subfield:
        raise DimensionMismatchError("local code must be over the designated subfield")
    if local.n != family.n or local.k != family.n - family.r:
        raise DimensionMismatchError(f"local code must be [{family.n}, {family.n - family.r}]")
    if not certify_mds(local):
        raise InvalidParametersError("local code is not MDS")


def family_apply(family: UniversalFamily, local: LinearCode, message) -> np.ndarray:
    """Encode one row of ``F(local)``.

    Gabidulin family: ``message`` (length ``mu*(n-r) - s``) is Gabidulin
    encoded and each block of ``n - r`` symbols is multiplied by the local
    systematic generator.  Gabrys family: ``message`` is encoded with the
    canonical generator of the parity-check-defined code.
    """
    field = family.field
    msg = np.asarray(message, dtype=np.int64)
    _check_local(family, local)
    if family.kind == "gabidulin":
        x = family.gabidulin.encode(msg)
        g = field.embed(local.G)
        k = family.n - family.r
        blocks = [field.matmul(x[i * k:(i + 1) * k], g) for i in range(family.mu)]
        return np.concatenate(blocks)
    return family_code(family, local).encode(msg)


class ScalarPmdsCode(ArrayCode):
    """A single-row array code wrapping one parity-check matrix, for certification."""

    kind = "scalar"

    def __init__(self, field: GaloisField, H, mu: int, n: int, r: int, s: int):
        self.field = field
        self.H = np.asarray(H, dtype=np.int64)
        self.mu, self.n, self.r, self.s = mu, n, r, s
        self.ell = 1

    def parity_stack(self, rows=None) -> np.ndarray:
        count = 1 if rows is None else len(rows)
        return np.broadcast_to(self.H, (count,) + self.H.shape).copy()

    def descriptor(self) -> dict:
        out = super().descriptor()
        out["H"] = self.H.tolist()
        return out


def scalar_pmds(family: UniversalFamily, local: LinearCode) -> ScalarPmdsCode:
    code = family_code(family, local)
    return ScalarPmdsCode(family.field, code.H, family.mu, family.n, family.r, family.s)


class LocalMsrUniversalPmdsCode(ArrayCode):
    """Row ``a`` of each codeword lies in ``F(row_code(a))`` of a Ye-Barg code over GF(q)."""

    kind = "universal"

    def __init__(self, family: UniversalFamily, d: int, betas=None):
        small = family.field.subfield
        self.family = family
        self.field = family.field
        self.mu, self.n, self.r, self.s = family.mu, family.n, family.r, family.s
        self.d = d
        self.msr = YeBargCode(small, family.n, family.r, d, betas)
        self.b = self.msr.b
        self.ell = self.msr.ell
        self.expansion_degree = family.field.degree_over_subfield
        self.repair_symbol_field = repr(small)

    def parity_stack(self, rows=None) -> np.ndarray:
        if rows is None:
            rows = np.arange(self.ell)
        return self.family.parity_stack(self.msr.parity_stack(rows))

    def local_array_code(self) -> YeBargCode:
        """The group code over GF(q^M): Ye-Barg with the same (embedded) locators."""
        return YeBargCode(self.field, self.n, self.r, self.d, self.field.embed(self.msr.betas))

    def repair_local(self, word, failed: int, helpers=None):
        return local_repair_expanded(self, word, failed, helpers)

    def descriptor(self) -> dict:
        out = super().descriptor()
        out.update(family=self.family.descriptor(), d=self.d, betas=self.msr.betas.tolist())
        return out


def build_universal_msr_pmds(family: UniversalFamily, n: int, r: int, d: int,
                             betas=None) -> LocalMsrUniversalPmdsCode:
    if (n, r) != (family.n, family.r):
        raise InvalidParametersError("family and MSR code parameters disagree")
    b = d + 1 - n + r
    if family.field.q < b * n:
        raise FieldTooSmallError(f"need q >= b*n = {b * n}, subfield has {family.field.q}")
    return LocalMsrUniversalPmdsCode(family, d, betas)


def local_repair_expanded(code: LocalMsrUniversalPmdsCode, word, failed: int,
                          helpers: Optional[Sequence[int]] = None):
    """Repair one node by expanding its group into ``M`` Ye-Barg codewords over GF(q).

    The transcript counts GF(q) symbols: ``M * d * ell / b`` in total.
    """
    field = code.field
    data = word.data if isinstance(word, ArrayCodeword) else np.asarray(word, dtype=np.int64)
    g = code.group_of(failed)
    cols = code.group(g)
    offset = cols[0]
    local_helpers = None if helpers is None else [h - offset for h in helpers]
    coords = field.expand(data[:, cols])  # (ell, n, M)
    M = coords.shape[-1]
    parts = []
    tr = None
    for t in range(M):
        col, tr = repair_node(code.msr, coords[:, :, t], failed - offset, local_helpers)
        parts.append(col)
    column = field.combine(np.stack(parts, axis=-1))
    helpers_g = [h + offset for h in tr.helpers]
    transcript = RepairTranscript(
        failed=[failed], helpers=helpers_g,
        per_helper={h: M * tr.per_helper[h - offset] for h in helpers_g},
        symbol_field=repr(field.subfield),
        bound=M * cut_set_bound(code.n, code.r, code.d, code.ell))
    return column, transcript
