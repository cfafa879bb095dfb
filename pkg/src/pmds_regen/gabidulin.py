"""Gabidulin codes over GF(q^M) and their behaviour under GF(q)-linear column maps."""

from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from .errors import DependentLocatorsError, FieldError, InvalidParametersError, SingularMatrixError
from .gf import GaloisField
from .matrix import inverse_array, moore_array
from .mds import LinearCode


class GabidulinCode(LinearCode):
    """``Gab(n, k, b)``: parity checks are the first ``n - k`` Moore rows of ``b``."""

    def __init__(self, field: GaloisField, locators: Sequence[int], k: int):
        locs = np.asarray(locators, dtype=np.int64)
        n = len(locs)
        if n > field.degree_over_subfield:
            raise InvalidParametersError(
                f"length {n} exceeds the extension degree {field.degree_over_subfield}")
        if not 0 <= k <= n:
            raise InvalidParametersError(f"dimension {k} outside [0, {n}]")
        if not field.linearly_independent_over_subfield(locs):
            raise DependentLocatorsError(f"locators {locs.tolist()} are dependent over GF({field.q})")
        super().__init__(field, moore_array(field, locs, n - k))
        self.locators = locs

    def __repr__(self):
        return f"GabidulinCode([{self.n},{self.k}], b={self.locators.tolist()}, {self.field!r})"

    def to_json(self) -> str:
        return json.dumps({"field": self.field.descriptor(), "locators": self.locators.tolist(), "k": self.k})

    @classmethod
    def from_json(cls, text: str) -> "GabidulinCode":
        obj = json.loads(text)
        return cls(GaloisField.from_descriptor(obj["field"]), obj["locators"], obj["k"])


def default_locators(field: GaloisField, n: int) -> np.ndarray:
    """The polynomial basis ``1, x, ..., x^(n-1)`` as field integers."""
    if n > field.degree_over_subfield:
        raise InvalidParametersError(
            f"length {n} exceeds the extension degree {field.degree_over_subfield}")
    return field.combine(np.eye(field.degree_over_subfield, dtype=np.int64)[:n])


def gabidulin_code(field: GaloisField, locators: Optional[Sequence[int]] = None, k: int = 0,
                   n: Optional[int] = None) -> GabidulinCode:
    if locators is None:
        if n is None:
            raise InvalidParametersError("give either locators or a length")
        locators = default_locators(field, n)
    return GabidulinCode(field, locators, k)


def locator_transform(code: GabidulinCode, transform) -> GabidulinCode:
    """The code ``{c A : c in code}``, which is again Gabidulin with locators ``b (A^-1)^T``.

    Moore rows commute with GF(q)-linear combinations, so ``H A^-T`` is the
    Moore matrix of ``b A^-T`` and annihilates ``c A``.

    ``transform`` is an invertible ``n x n`` matrix whose entries lie in the
    designated subfield (given as integers of the big field).
    """
    field = code.field
    a = np.asarray(transform, dtype=np.int64)
    if a.shape != (code.n, code.n):
        raise InvalidParametersError(f"transform must be {code.n}x{code.n}")
    if not np.all(field.in_subfield(a)):
        raise FieldError("transform entries are not in the designated subfield")
    try:
        a_inv = inverse_array(field, a)
    except SingularMatrixError:
        raise SingularMatrixError("transform is singular") from None
    new_locs = field.matmul(code.locators, a_inv.T)
    return GabidulinCode(field, new_locs, code.k)
