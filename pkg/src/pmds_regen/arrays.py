"""Array codewords, repair transcripts and the shared machinery of row-wise array codes.

An array code here has ``ell`` rows and ``mu * n`` columns (storage nodes).
Row ``a`` of every codeword lies in a scalar code given by its own
parity-check matrix, so everything (encoding, erasure decoding, certification)
is done row by row on stacks of parity-check matrices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, UnrecoverableError
from .gf import GaloisField
from .mds import decode_rows

ROW_CHUNK = 1 << 15


@dataclass
class ArrayCodeword:
    """One stripe: an ``ell x cols`` grid over ``field``; column ``j`` is node ``j``."""

    field: GaloisField
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise DimensionMismatchError("codeword array must be 2-D")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def erase(self, columns: Sequence[int]) -> "ArrayCodeword":
        out = self.data.copy()
        out[:, list(columns)] = 0
        return ArrayCodeword(self.field, out)

    def copy(self) -> "ArrayCodeword":
        return ArrayCodeword(self.field, self.data.copy())

    def __eq__(self, other):
        return (isinstance(other, ArrayCodeword) and self.field == other.field
                and self.data.shape == other.data.shape and bool(np.all(self.data == other.data)))

    def to_json(self) -> str:
        return json.dumps({"field": self.field.descriptor(), "rows": self.rows,
                           "cols": self.cols, "data": self.data.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "ArrayCodeword":
        obj = json.loads(text)
        data = np.array(obj["data"], dtype=np.int64).reshape(obj["rows"], obj["cols"])
        return cls(GaloisField.from_descriptor(obj["field"]), data)


@dataclass
class RepairTranscript:
    """What each helper sent during one node repair.

    ``symbol_field`` names the field the transmitted symbols live in, since the
    expanded repair of the universal codes counts base-field symbols.
    """

    failed: List[int]
    helpers: List[int]
    per_helper: Dict[int, int]
    symbol_field: str
    bound: Fraction
    regenerating: bool = True
    payload: Dict[int, np.ndarray] = dc_field(default_factory=dict, repr=False)

    @property
    def total(self) -> int:
        return sum(self.per_helper.values())

    @property
    def meets_bound(self) -> bool:
        return self.total == self.bound

    def to_json(self) -> str:
        return json.dumps({
            "failed": self.failed, "helpers": self.helpers,
            "per_helper": {str(k): v for k, v in self.per_helper.items()},
            "symbol_field": self.symbol_field, "total": self.total,
            "cut_set_bound": str(self.bound), "regenerating": self.regenerating,
        })


def cut_set_bound(n: int, r: int, helpers: int, ell: int, failed: int = 1) -> Fraction:
    """Minimum download for repairing ``failed`` nodes from ``helpers`` nodes of an MDS array code."""
    return Fraction(failed * helpers * ell, failed + helpers - n + r)


def row_digits(a, b: int, n: int) -> np.ndarray:
    """Base-``b`` digits of row indices, least significant first; shape ``a.shape + (n,)``."""
    a = np.asarray(a, dtype=np.int64)
    return (a[..., None] // (b ** np.arange(n, dtype=np.int64))) % b


class ArrayCode:
    """Base class: ``mu`` local groups of ``n`` columns, ``r`` local and ``s`` global parities.

    Subclasses implement :meth:`parity_stack`.
    """

    field: GaloisField
    mu: int
    n: int
    r: int
    s: int
    ell: int

    kind = "array"

    def parity_stack(self, rows: Optional[np.ndarray] = None) -> np.ndarray:
        """Parity-check matrices of the given rows, shape ``(len(rows), m, mu*n)``."""
        raise NotImplementedError

    @property
    def length(self) -> int:
        return self.mu * self.n

    @property
    def row_redundancy(self) -> int:
        return self.parity_stack(np.array([0])).shape[1]

    @property
    def row_dimension(self) -> int:
        return self.length - self.row_redundancy

    def group(self, g: int) -> List[int]:
        return list(range(g * self.n, (g + 1) * self.n))

    @property
    def groups(self) -> List[List[int]]:
        return [self.group(g) for g in range(self.mu)]

    def group_of(self, column: int) -> int:
        return column // self.n

    def parity_positions(self) -> List[int]:
        """Columns recomputed by systematic encoding.

        The last ``r`` columns of each group plus the last ``s`` survivors, an
        admissible erasure pattern, so recovering them is always possible.
        """
        local = [c for g in range(self.mu) for c in self.group(g)[self.n - self.r:]]
        rest = [c for c in range(self.length) if c not in local]
        extra = rest[len(rest) - self.s:] if self.s else []
        return sorted(local + extra)

    def info_positions(self) -> List[int]:
        par = set(self.parity_positions())
        return [c for c in range(self.length) if c not in par]

    def _row_chunks(self):
        for start in range(0, self.ell, ROW_CHUNK):
            yield np.arange(start, min(start + ROW_CHUNK, self.ell))

    def encode(self, message) -> ArrayCodeword:
        """Systematic encoding; ``message`` is ``ell x k`` with ``k = row_dimension``."""
        msg = self.field.array(message)
        info = self.info_positions()
        if msg.shape != (self.ell, len(info)):
            raise DimensionMismatchError(f"message must be {self.ell}x{len(info)}, got {msg.shape}")
        data = np.zeros((self.ell, self.length), dtype=np.int64)
        data[:, info] = msg
        return self.decode_erasures(ArrayCodeword(self.field, data), self.parity_positions())

    def extract_message(self, word: ArrayCodeword) -> np.ndarray:
        return word.data[:, self.info_positions()].copy()

    def decode_erasures(self, word: ArrayCodeword, erased: Sequence[int]) -> ArrayCodeword:
        """Recover erased columns row by row; raises with the first failing row."""
        erased = sorted(set(int(e) for e in erased))
        out = word.data.copy()
        for rows in self._row_chunks():
            h = self.parity_stack(rows)
            filled, ok = decode_rows(self.field, h, out[rows], erased)
            if not ok.all():
                bad = int(rows[np.argmin(ok)])
                raise UnrecoverableError(f"columns {erased} not recoverable in row {bad}", row=bad)
            out[rows] = filled
        return ArrayCodeword(self.field, out)

    def is_codeword(self, word: ArrayCodeword) -> bool:
        for rows in self._row_chunks():
            h = self.parity_stack(rows)
            syn = self.field.matmul(h, word.data[rows][..., None])
            if np.any(syn):
                return False
        return True

    def random_message(self, rng=None) -> np.ndarray:
        return self.field.random((self.ell, self.row_dimension), rng=rng)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "field": self.field.descriptor(), "mu": self.mu,
                "n": self.n, "r": self.r, "s": self.s, "ell": self.ell}


@dataclass(frozen=True)
class ErasurePattern:
    """Erased columns of a ``mu``-group array code.

    ``local[g]`` holds the erased columns (global indices) inside group ``g``;
    ``extra`` holds further erased columns anywhere else.
    """

    local: tuple
    extra: tuple = ()

    @classmethod
    def from_columns(cls, code: ArrayCode, columns: Sequence[int]) -> "ErasurePattern":
        cols = sorted(set(int(c) for c in columns))
        return cls(tuple(tuple(c for c in cols if code.group_of(c) == g) for g in range(code.mu)))

    def columns(self) -> List[int]:
        return sorted(set(c for e in self.local for c in e) | set(self.extra))

    def _split(self, code, r):
        """Greedy view: first ``r`` erasures per group are local, the rest global."""
        by_group = [sorted(c for c in self.columns() if code.group_of(c) == g) for g in range(code.mu)]
        return [e[:r] for e in by_group], [c for e in by_group for c in e[r:]]

    def is_pmds_admissible(self, code: ArrayCode) -> bool:
        """Covered by a pattern of exactly ``r`` per group plus ``s`` more."""
        loc, rest = self._split(code, code.r)
        return len(rest) <= code.s

    def is_sd_admissible(self, code: ArrayCode) -> bool:
        """Covered by ``r`` equal in-group positions per group plus ``s`` more."""
        cols = set(self.columns())
        for pos in itertools.combinations(range(code.n), code.r):
            covered = {g * code.n + p for g in range(code.mu) for p in pos}
            if len(cols - covered) <= code.s:
                return True
        return False

    def to_json(self) -> str:
        return json.dumps({"local": [list(e) for e in self.local], "extra": list(self.extra)})
