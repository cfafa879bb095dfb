"""Build codes from parameters or from their JSON descriptors."""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .errors import InvalidParametersError
from .gf import GF, GaloisField, smallest_prime_power_at_least
from .globalmsr import GlobalMsrPmdsCode, build_global_msr_pmds
from .mds import LinearCode
from .pmds2 import LocalMsrPmds2Code, build_pmds2
from .sizes import global_field_base
from .universal import (LocalMsrUniversalPmdsCode, ScalarPmdsCode, UniversalFamily,
                        build_universal_msr_pmds)
from .yebarg import YeBargCode

CONSTRUCTIONS = ("pmds2", "universal-gabidulin", "universal-gabrys", "global", "yebarg")


def _tower(q: int, M: int) -> GaloisField:
    p, t = smallest_prime_power_at_least(q)
    if p**t != q:
        raise InvalidParametersError(f"{q} is not a prime power")
    return GF(p, t * M, None, t)


def build_code(construction: str, mu: int = 2, n: int = 4, r: int = 2, s: int = 2,
               d: Optional[int] = None, mode: str = "PMDS", q: Optional[int] = None,
               M: Optional[int] = None, seed: int = 0):
    """Build a code with default field choices for each construction.

    ``q`` and ``M`` override the base field size and extension degree of the
    universal and global constructions.
    """
    if d is None:
        d = n - 1
    b = d + 1 - n + r
    if construction == "pmds2":
        return build_pmds2(mu, n, r, d, mode)
    if construction == "yebarg":
        p, t = smallest_prime_power_at_least(b * n, char=2) if q is None else smallest_prime_power_at_least(q)
        return YeBargCode(GF(p, t), n, r, d)
    if construction in ("universal-gabidulin", "universal-gabrys"):
        if q is None:
            p, t = smallest_prime_power_at_least(b * n, char=2)
            q = p**t
        if construction == "universal-gabidulin":
            field = _tower(q, M if M is not None else mu * (n - r))
            family = UniversalFamily("gabidulin", field, mu, n, r, s)
        else:
            field = _tower(q, M if M is not None else mu * n)
            family = UniversalFamily("gabrys", field, mu, n, r, s, seed=seed)
        return build_universal_msr_pmds(family, n, r, d)
    if construction == "global":
        if q is None:
            q = global_field_base(n)
        field = _tower(q, M if M is not None else mu * (n - r + s - 1))
        return build_global_msr_pmds(field, mu, n, r, s)
    raise InvalidParametersError(f"unknown construction {construction!r}; choose from {CONSTRUCTIONS}")


def code_from_descriptor(desc: dict):
    """Inverse of ``code.descriptor()``."""
    kind = desc.get("kind")
    field = GaloisField.from_descriptor(desc["field"])
    if kind == "pmds2":
        return LocalMsrPmds2Code(field, desc["mu"], desc["n"], desc["r"], desc["d"], desc["mode"],
                                 desc["beta"])
    if kind == "yebarg":
        return YeBargCode(field, desc["n"], desc["r"], desc["d"], desc["betas"])
    if kind == "universal":
        fam = desc["family"]
        family = UniversalFamily(fam["family"], field, fam["mu"], fam["n"], fam["r"], fam["s"],
                                 locators=fam.get("locators"), alphas=fam.get("alphas"))
        return LocalMsrUniversalPmdsCode(family, desc["d"], desc["betas"])
    if kind == "global-msr":
        inner = LinearCode(field.subfield, np.array(desc["inner_H"], dtype=np.int64))
        B = None if desc["B"] == "subspace" else np.array(desc["B"], dtype=np.int64)
        return GlobalMsrPmdsCode(field, desc["mu"], desc["n"], desc["r"], desc["s"], inner, B)
    if kind == "scalar":
        return ScalarPmdsCode(field, np.array(desc["H"], dtype=np.int64), desc["mu"], desc["n"],
                              desc["r"], desc["s"])
    raise InvalidParametersError(f"unknown code kind {kind!r}")


def save_code(code, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(code.descriptor(), fh)


def load_code(path: str):
    with open(path) as fh:
        return code_from_descriptor(json.load(fh))
