"""Scalar linear codes given by parity checks, Reed-Solomon codes and MDS tests."""

from __future__ import annotations

import itertools
import json
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (DimensionMismatchError, DuplicateLocatorError, FieldTooSmallError,
                     UnrecoverableError, WordNotInCodeError)
from .gf import GaloisField
from .matrix import (batched_is_invertible, batched_rref, null_space_array,
                     rank_array, rref_array, vandermonde_array)


def decode_rows(field: GaloisField, checks, words, erased: Sequence[int]):
    """Fill the ``erased`` columns of many words, each against its own parity checks.

    Args:
        checks: ``(m, n)`` shared by every word, or ``(B, m, n)`` one per word.
        words: ``(B, n)``; entries in erased columns are ignored.
        erased: column indices to recover.

    Returns:
        ``(completed, ok)``.  ``ok[b]`` is false when the erased columns of
        ``checks[b]`` do not have full column rank or the known part is
        inconsistent with the code.
    """
    words = np.array(words, dtype=np.int64, copy=True)
    checks = np.asarray(checks, dtype=np.int64)
    erased = list(erased)
    nb, n = words.shape
    if not erased:
        if checks.shape[-2] == 0:
            return words, np.ones(nb, dtype=bool)
        syn = _syndromes(field, checks, words)
        return words, ~np.any(syn, axis=-1)
    words[:, erased] = 0
    syn = _syndromes(field, checks, words)  # equals H_K y_K
    h_e = checks[..., erased]
    if h_e.ndim == 2:
        h_e = np.broadcast_to(h_e, (nb,) + h_e.shape)
    rhs = field.neg(syn)[..., None]
    e = len(erased)
    if h_e.shape[1] < e:
        return words, np.zeros(nb, dtype=bool)
    red, _, rank = batched_rref(field, np.concatenate([h_e, rhs], axis=-1), ncols=e)
    ok = rank == e
    ok &= ~np.any(red[:, e:, e], axis=1)
    words[:, erased] = red[:, :e, e]
    return words, ok


def _syndromes(field, checks, words):
    if checks.ndim == 2:
        return field.matmul(words, checks.T)
    return field.matmul(checks, words[..., None])[..., 0]


class LinearCode:
    """An ``[n, k]`` linear code defined by its parity-check matrix.

    Args:
        field: the alphabet.
        parity_check: ``(n - k) x n`` matrix of full row rank.
    """

    def __init__(self, field: GaloisField, parity_check):
        h = np.asarray(parity_check, dtype=np.int64)
        if h.ndim != 2:
            raise DimensionMismatchError("parity-check matrix must be 2-D")
        h = field.array(h)
        if h.shape[0] and rank_array(field, h) != h.shape[0]:
            raise DimensionMismatchError("parity-check matrix is not of full row rank")
        self.field = field
        self.H = h
        self.n = h.shape[1]
        self.k = self.n - h.shape[0]

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    @cached_property
    def G(self) -> np.ndarray:
        """Canonical generator: the reduced row echelon form of the dual of ``H``."""
        basis = null_space_array(self.field, self.H)
        if basis.shape[0] == 0:
            return basis
        return rref_array(self.field, basis)[0]

    def __repr__(self):
        return f"LinearCode([{self.n},{self.k}] over {self.field!r})"

    def encode(self, message) -> np.ndarray:
        """``message @ G``; works on a single message or a stack."""
        return self.field.matmul(np.asarray(message, dtype=np.int64), self.G)

    def contains(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        return not np.any(self.field.matmul(self.H, word))

    def syndrome(self, word) -> np.ndarray:
        return self.field.matmul(self.H, np.asarray(word, dtype=np.int64))

    def to_json(self) -> str:
        return json.dumps({"field": self.field.descriptor(), "n": self.n, "H": self.H.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        obj = json.loads(text)
        field = GaloisField.from_descriptor(obj["field"])
        h = np.array(obj["H"], dtype=np.int64).reshape(-1, obj["n"])
        return cls(field, h)


def rs_code(field: GaloisField, locators: Sequence[int], k: int) -> LinearCode:
    """Reed-Solomon code whose parity checks are the Vandermonde rows on ``locators``."""
    locs = [int(x) for x in locators]
    if len(set(locs)) != len(locs):
        raise DuplicateLocatorError(f"locators are not distinct: {locs}")
    n = len(locs)
    if not 0 <= k <= n:
        raise DimensionMismatchError(f"dimension {k} outside [0, {n}]")
    return LinearCode(field, vandermonde_array(field, locs, n - k))


def erasure_decode(code: LinearCode, word, erased: Iterable[int]) -> np.ndarray:
    """Recover the erased positions of one word.

    ``erased`` may be a boolean mask of length ``n`` or a list of indices.
    """
    word = np.asarray(word, dtype=np.int64)
    erased = _as_indices(erased, code.n)
    out, ok = decode_rows(code.field, code.H, word[None], erased)
    if not ok[0]:
        if not erased:
            raise WordNotInCodeError("nonzero syndrome")
        raise UnrecoverableError(f"erasures {erased} are not recoverable")
    return out[0]


def _as_indices(erased, n):
    erased = list(erased)
    if len(erased) == n and all(isinstance(x, (bool, np.bool_)) for x in erased):
        return [i for i, e in enumerate(erased) if e]
    return sorted(int(i) for i in erased)


def certify_mds(code: LinearCode, chunk: int = 200_000) -> bool:
    """True iff every set of ``n - k`` columns of ``H`` is invertible."""
    m = code.redundancy
    if m == 0:
        return True
    combos = itertools.combinations(range(code.n), m)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return True
        idx = np.array(block)
        mats = np.moveaxis(code.H[:, idx], 1, 0)  # (B, m, m)
        if not batched_is_invertible(code.field, mats).all():
            return False


def minimum_distance(code: LinearCode) -> int:
    """Brute force over all nonzero codewords; only for small ``q**k``."""
    if code.k == 0:
        return code.n + 1
    q = code.field.order
    msgs = np.array(list(itertools.product(range(q), repeat=code.k))[1:], dtype=np.int64)
    words = code.encode(msgs)
    return int(np.min(np.count_nonzero(words, axis=1)))


def random_mds_code(field: GaloisField, n: int, k: int, seed=None, tries: int = 64) -> LinearCode:
    """A generalized Reed-Solomon code on random distinct locators and random column scalings.

    Deterministic for a given ``seed``.
    """
    if n > field.order:
        raise FieldTooSmallError(f"need {n} distinct locators, field has {field.order} elements")
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        locs = rng.choice(field.order, size=n, replace=False).astype(np.int64)
        scale = field.random(n, rng=rng, nonzero=True)
        h = field.mul(vandermonde_array(field, locs, n - k), scale[None, :])
        code = LinearCode(field, h)
        if certify_mds(code):
            return code
    raise FieldTooSmallError("no MDS code found within the retry budget")
