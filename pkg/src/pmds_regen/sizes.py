"""Field sizes and subpacketization of the PMDS constructions, in exact integer arithmetic.

Constructions:

``A``  Blaum-type rows with Ye-Barg groups over GF(2^w) (two global parities).
``B``  universal family with Gabidulin global parities and Ye-Barg groups.
``C``  universal family over a linearized-RS local code (formula only).
``D``  universal family with independent-set global parities and Ye-Barg groups.
``E``  an earlier locally-MSR PMDS construction, kept for comparison.
``Global``  PMDS codes whose global parities also repair at the cut-set bound.

Some of these numbers have billions of digits.  Those are kept as
:class:`PowerInt` (``base ** exp``) and compared without expanding them.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from decimal import Decimal, localcontext
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import InvalidParametersError
from .gf import prime_factors, smallest_prime_power_at_least

CONSTRUCTIONS = ("A", "B", "C", "D", "E", "Global")
CSV_HEADER = ["n", "mu", "r", "s", "d", "construction", "q_lower", "q_upper", "ell"]
EXPAND_BITS = 1 << 16


class InvalidForConstructionError(InvalidParametersError):
    pass


@total_ordering
class PowerInt:
    """The exact integer ``base ** exp``, never expanded unless it is small."""

    __slots__ = ("base", "exp")

    def __init__(self, base: int, exp: int):
        if base < 1 or exp < 0:
            raise InvalidParametersError("PowerInt needs base >= 1 and exp >= 0")
        self.base, self.exp = int(base), int(exp)

    @property
    def bits(self) -> int:
        """Upper bound on the bit length."""
        return self.exp * self.base.bit_length()

    @property
    def small(self) -> bool:
        return self.bits <= EXPAND_BITS

    def value(self) -> int:
        if not self.small:
            raise OverflowError(f"{self.base}^{self.exp} is too large to expand")
        return self.base**self.exp

    def _factors(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        b = self.base
        for p in prime_factors(b):
            k = 0
            while b % p == 0:
                b //= p
                k += 1
            out[p] = k * self.exp
        return out

    def _cmp(self, other) -> int:
        other = as_power(other)
        if self.small and other.small:
            a, b = self.value(), other.value()
            return (a > b) - (a < b)
        if self.base == other.base:
            return (self.exp > other.exp) - (self.exp < other.exp)
        if self._factors() == other._factors():
            return 0
        # distinct values: compare exp*ln(base) with growing precision
        prec = 40
        while True:
            with localcontext() as ctx:
                ctx.prec = prec
                x = Decimal(self.exp) * Decimal(self.base).ln()
                y = Decimal(other.exp) * Decimal(other.base).ln()
                tol = (abs(x) + abs(y) + 1) * Decimal(10) ** (5 - prec)
                if x - y > tol:
                    return 1
                if y - x > tol:
                    return -1
            prec *= 2

    def __eq__(self, other):
        if not isinstance(other, (int, PowerInt)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (int, PowerInt)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash(self.value()) if self.small else hash((self.base, self.exp))

    def __repr__(self):
        return f"PowerInt({self.base}, {self.exp})"

    def __str__(self):
        return str(self.value()) if self.small else f"{self.base}^{self.exp}"


def as_power(x: Union[int, PowerInt]) -> PowerInt:
    return x if isinstance(x, PowerInt) else PowerInt(int(x), 1)


def power(base: int, exp: int) -> Union[int, PowerInt]:
    """``base ** exp`` as a plain int when small, otherwise a PowerInt."""
    p = PowerInt(base, exp)
    return p.value() if p.small else p


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        return 0
    num = math.prod(q**(n - i) - 1 for i in range(k))
    den = math.prod(q**(i + 1) - 1 for i in range(k))
    return num // den


def global_subpacketization(q: int, mu: int, k: int, s: int) -> int:
    """Rows of the subspace locator matrix: ordered bases of ``k``-subspaces of GF(q)^(k+s-1), to the ``mu``.

    Counted as (number of subspaces) x (ordered bases of each); the base
    count is ``prod_{t<k} (q^k - q^t)``.
    """
    D = k + s - 1
    per_block = gaussian_binomial(D, k, q) * math.prod(q**k - q**t for t in range(k))
    return per_block**mu


@dataclass(frozen=True)
class ParamPoint:
    """One PMDS parameter set ``(mu, n, r, s)`` with ``d`` local helpers."""

    mu: int
    n: int
    r: int
    s: int
    d: int

    def __post_init__(self):
        if self.mu < 2 or self.n < 2 or not 1 <= self.r < self.n:
            raise InvalidParametersError(f"invalid parameters {self}")
        if not 1 <= self.s <= (self.n - self.r) * (self.mu - 1):
            raise InvalidParametersError(f"s={self.s} outside [1, (n-r)(mu-1)]")
        if not self.n - self.r <= self.d <= self.n - 1:
            raise InvalidParametersError(f"d={self.d} outside [n-r, n-1]")

    @property
    def b(self) -> int:
        return self.d + 1 - self.n + self.r


def field_size_bounds(point: ParamPoint, construction: str):
    """``(lower, upper)`` on the smallest field size; equal when the size is exact."""
    mu, n, r, s, b = point.mu, point.n, point.r, point.s, point.b
    if construction == "A":
        if s != 2:
            raise InvalidForConstructionError("construction A needs s = 2")
        base = mu * r * (r * n - r + n - 2)
        return base + 1, 2 * base
    if construction == "B":
        v = (b * n)**(mu * (n - r))
        return v, v
    if construction == "C":
        v = max(b * n, mu + 1)**(n - r)
        return v, v
    if construction == "D":
        e = s * (r + 1) - 1
        return n * b * (n * mu)**e, 2 * n * b * (2 * n * mu)**e
    if construction == "E":
        v = power(b * n, b**n * mu * (n - r))
        return v, v
    if construction == "Global":
        e = mu * (n - r + s - 1)
        return (n - 1)**e, (2 * (n - 1))**e
    raise InvalidForConstructionError(f"unknown construction {construction!r}")


def global_field_base(n: int) -> int:
    """The base field size the global construction uses: smallest prime power >= n - 1."""
    p, m = smallest_prime_power_at_least(max(n - 1, 2))
    return p**m


def subpacketization(point: ParamPoint, construction: str, q: Optional[int] = None) -> int:
    """``b^n`` for the locally regenerating constructions; the subspace count for ``Global``.

    For ``Global`` the base field defaults to :func:`global_field_base`.
    """
    if construction in ("A", "B", "C", "D", "E"):
        if construction == "A" and point.s != 2:
            raise InvalidForConstructionError("construction A needs s = 2")
        return point.b**point.n
    if construction == "Global":
        if q is None:
            q = global_field_base(point.n)
        k = point.n - point.r
        ell = global_subpacketization(q, point.mu, k, point.s)
        assert ell <= 4**point.mu * q**(point.mu * k * (k + point.s - 1))
        return ell
    raise InvalidForConstructionError(f"unknown construction {construction!r}")


def sweep_points(n_values: Iterable[int], mu_values: Iterable[int], r_values=None, s_values=None,
                 d_values=None, nontrivial: bool = False) -> Iterator[ParamPoint]:
    """Every valid point over the given ranges (all valid r, s, d when not given).

    ``nontrivial`` skips ``d = n - r``.
    """
    for n in n_values:
        for mu in mu_values:
            for r in (r_values if r_values is not None else range(1, n)):
                if not 1 <= r < n:
                    continue
                for s in (s_values if s_values is not None else range(1, (n - r) * (mu - 1) + 1)):
                    if not 1 <= s <= (n - r) * (mu - 1):
                        continue
                    for d in (d_values if d_values is not None else range(n - r, n)):
                        if not n - r <= d <= n - 1 or (nontrivial and d == n - r):
                            continue
                        yield ParamPoint(mu, n, r, s, d)


@dataclass
class ComparisonReport:
    points: int = 0
    checked: Dict[str, int] = dc_field(default_factory=dict)
    violations: Dict[str, List[Tuple[int, int, int, int, int]]] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> str:
        return json.dumps({"points": self.points, "checked": self.checked,
                           "violations": {k: [list(p) for p in v] for k, v in self.violations.items()},
                           "ok": self.ok})


RELATIONS = ("i", "ii-a", "ii-b", "iii", "iv")


def comparison_relations(point: ParamPoint) -> Dict[str, bool]:
    """Which relations apply at ``point`` and whether each holds.

    * ``i``: ``Q_C < Q_B < Q_E``.
    * ``ii-a`` (s = 2): ``Q_A`` upper < ``Q_D`` lower.
    * ``ii-b`` (s = 2, r < n-3, mu <= n^(n-r-3)): ``Q_A`` upper < ``Q_C``.
    * ``iii`` (s(r+1) + 2r - 1 >= 2n): ``Q_C`` < ``Q_D`` lower.
    * ``iv`` (2s(r+1) + r <= n): ``Q_D`` upper < ``Q_C``.
    """
    n, mu, r, s = point.n, point.mu, point.r, point.s
    qb = field_size_bounds(point, "B")[0]
    qc = field_size_bounds(point, "C")[0]
    qe = field_size_bounds(point, "E")[0]
    qd_lo, qd_hi = field_size_bounds(point, "D")
    out = {"i": qc < qb and as_power(qb) < qe}
    if s == 2:
        qa_hi = field_size_bounds(point, "A")[1]
        out["ii-a"] = qa_hi < qd_lo
        if r < n - 3 and mu <= n**(n - r - 3):
            out["ii-b"] = qa_hi < qc
    if s * (r + 1) + 2 * r - 1 >= 2 * n:
        out["iii"] = qc < qd_lo
    if 2 * s * (r + 1) + r <= n:
        out["iv"] = qd_hi < qc
    return out


def check_comparison_theorem(n_values: Iterable[int] = range(3, 13),
                             mu_values: Iterable[int] = range(2, 9)) -> ComparisonReport:
    """Evaluate every applicable relation at every point with ``d > n - r``."""
    report = ComparisonReport(checked={k: 0 for k in RELATIONS}, violations={k: [] for k in RELATIONS})
    for pt in sweep_points(n_values, mu_values, nontrivial=True):
        report.points += 1
        for name, holds in comparison_relations(pt).items():
            report.checked[name] += 1
            if not holds:
                report.violations[name].append((pt.n, pt.mu, pt.r, pt.s, pt.d))
    return report


def emit_csv(points: Iterable[ParamPoint], constructions: Sequence[str] = CONSTRUCTIONS) -> str:
    """One CSV row per (point, construction); constructions that do not apply are skipped.

    Integers too large to print are written as ``base^exp``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for pt in points:
        for c in constructions:
            try:
                lo, hi = field_size_bounds(pt, c)
                ell = subpacketization(pt, c)
            except InvalidForConstructionError:
                continue
            w.writerow([pt.n, pt.mu, pt.r, pt.s, pt.d, c, str(lo), str(hi), str(ell)])
    return buf.getvalue()
