"""Arithmetic in GF(p^m) with an optional designated subfield GF(q), q = p^t.

Elements are plain integers in ``[0, p^m)``: the base-p digits of the integer
are the coefficients of the polynomial representative, constant term first.
Every arithmetic method accepts Python ints or numpy integer arrays and
broadcasts like numpy.  ``FieldElement`` is a thin wrapper for interactive
use; the codes themselves work on arrays.

For fields up to ``TABLE_LIMIT`` elements, multiplication goes through
log/antilog tables.  Larger fields (up to roughly 2^32) fall back to
polynomial arithmetic element by element.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FieldError, MixedFieldsError, NoSubfieldError, ZeroElementError

TABLE_LIMIT = 1 << 20
_ADD_TABLE_LIMIT = 1024
_CONWAY_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# polynomials over GF(p), little-endian coefficient lists
# ---------------------------------------------------------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        coef = a[-1] * inv_lead % p
        quot[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        a = _trim(a)
    return quot, a


def _poly_mulmod(a, b, mod, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_divmod(prod, mod, p)[1]


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_eval(coeffs, y, mod, p):
    """Evaluate the GF(p)-polynomial ``coeffs`` at the ring element ``y`` (mod ``mod``)."""
    acc = []
    for c in reversed(coeffs):
        acc = _poly_mulmod(acc, y, mod, p) if acc else []
        acc = _trim(acc + [0] * (1 - len(acc)))
        acc = list(acc) if acc else [0]
        acc[0] = (acc[0] + c) % p
        acc = _trim(acc)
    return acc


def _int_to_poly(x, p):
    out = []
    while x:
        x, d = divmod(x, p)
        out.append(d)
    return out


def _poly_to_int(coeffs, p):
    x = 0
    for c in reversed(coeffs):
        x = x * p + c
    return x


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    f = _trim([c % p for c in coeffs])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            g = list(low) + [1]
            if not _poly_divmod(f, g, p)[1]:
                return False
    return True


def _x_has_full_order(f, p, m):
    order = p**m - 1
    if _poly_powmod([0, 1], order, f, p) != [1]:
        return False
    return all(_poly_powmod([0, 1], order // ell, f, p) != [1] for ell in prime_factors(order))


@functools.lru_cache(maxsize=None)
def conway_polynomial(p: int, m: int) -> Optional[tuple[int, ...]]:
    """Conway polynomial of degree ``m`` over GF(p), computed by search.

    Returns little-endian coefficients, or ``None`` when ``p**m`` exceeds the
    search limit.
    """
    if p**m > _CONWAY_LIMIT:
        return None
    divisors = [d for d in range(1, m) if m % d == 0]
    lower = {d: conway_polynomial(p, d) for d in divisors}
    if any(v is None for v in lower.values()):
        return None
    # candidates ordered by (a_{m-1}, ..., a_0) with f = x^m + sum (-1)^(m-i) a_i x^i
    for digits in itertools.product(range(p), repeat=m):
        a = list(reversed(digits))  # a[i] is a_i
        f = [((-1) ** (m - i) * a[i]) % p for i in range(m)] + [1]
        if f[0] == 0:
            continue
        if not _x_has_full_order(f, p, m):
            continue
        ok = True
        for d, g in lower.items():
            y = _poly_powmod([0, 1], (p**m - 1) // (p**d - 1), f, p)
            if _poly_eval(list(g), y, f, p):
                ok = False
                break
        if ok:
            return tuple(f)
    raise FieldError(f"no Conway polynomial found for p={p}, m={m}")


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree ``m``."""
    for code in range(p**m):
        f = _int_to_poly(code, p)
        f = f + [0] * (m - len(f)) + [1]
        if f[0] == 0 and m > 1:
            continue
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    return conway_polynomial(p, m) or smallest_irreducible(p, m)


def smallest_prime_power_at_least(bound: int, char: Optional[int] = None) -> tuple[int, int]:
    """Smallest prime power ``p**m >= bound`` as ``(p, m)``.

    With ``char`` given, only powers of that prime are considered.
    """
    if bound < 2:
        bound = 2
    if char is not None:
        if not is_prime(char):
            raise FieldError(f"{char} is not prime")
        m, q = 1, char
        while q < bound:
            q *= char
            m += 1
        return char, m
    x = bound
    while True:
        pf = prime_factors(x)
        if len(pf) == 1:
            return pf[0], _exact_log(x, pf[0])
        x += 1


def _exact_log(x, p):
    m = 0
    while x > 1:
        x //= p
        m += 1
    return m


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class GaloisField:
    """The finite field GF(p^m), optionally viewed as an extension of GF(p^t).

    Args:
        p: characteristic.
        m: extension degree over the prime field.
        modulus: monic irreducible polynomial of degree ``m`` over GF(p), as
            little-endian coefficients.  Defaults to the Conway polynomial when
            it can be found, else the smallest irreducible.
        subfield_degree: ``t`` with ``t | m``.  Designates GF(q), q = p^t, as the
            base field for Frobenius powers and coordinate expansion.
    """

    def __init__(self, p: int, m: int = 1, modulus: Optional[Sequence[int]] = None,
                 subfield_degree: Optional[int] = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be positive")
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(_trim(modulus)) != m + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree m")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        if subfield_degree is not None and (subfield_degree < 1 or m % subfield_degree):
            raise FieldError(f"subfield degree {subfield_degree} does not divide {m}")

        self.p = p
        self.m = m
        self.modulus = modulus
        self.order = p**m
        self.subfield_degree = subfield_degree
        self._powers = np.array([p**i for i in range(m)], dtype=np.int64)
        self._build_tables()
        self._subfield = None
        self._embed = None
        self._restrict = None
        if subfield_degree is not None:
            self._build_subfield()

    # -- identity ------------------------------------------------------------

    def _key(self):
        return (self.p, self.m, self.modulus, self.subfield_degree)

    def __eq__(self, other):
        return isinstance(other, GaloisField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        name = f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"
        if self.subfield_degree is not None:
            name += f" over GF({self.p}^{self.subfield_degree})"
        return name

    @property
    def q(self) -> int:
        """Size of the designated subfield."""
        self._need_subfield()
        return self.p**self.subfield_degree

    @property
    def degree_over_subfield(self) -> int:
        self._need_subfield()
        return self.m // self.subfield_degree

    @property
    def characteristic(self) -> int:
        return self.p

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus),
                "subfield_degree": self.subfield_degree}

    @classmethod
    def from_descriptor(cls, desc: dict) -> "GaloisField":
        modulus = desc.get("modulus")
        return GF(desc["p"], desc["m"], tuple(modulus) if modulus else None, desc.get("subfield_degree"))

    # -- tables --------------------------------------------------------------

    def _build_tables(self):
        self._tabled = self.order <= TABLE_LIMIT
        if not self._tabled:
            self.generator = self._find_generator_slow()
            return
        n = self.order - 1
        exp = np.zeros(2 * n + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        gen = self._find_generator_table()
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, gen)
        if x != 1:
            raise FieldError("generator search failed")
        exp[n:2 * n] = exp[:n]
        exp[2 * n] = exp[0]
        self.generator = gen
        self._exp = exp
        self._log = log
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        if self.p != 2:
            digits = self._digits(np.arange(self.order, dtype=np.int64))
            self._neg = self._undigits((self.p - digits) % self.p)
            self._neg_l = self._neg.tolist()
            if self.order <= _ADD_TABLE_LIMIT:
                a = digits[:, None, :]
                b = digits[None, :, :]
                self._add_table = self._undigits((a + b) % self.p)
            else:
                self._add_table = None

    def _find_generator_table(self):
        n = self.order - 1
        if n == 1:
            return 1
        factors = prime_factors(n)
        for g in range(2 if self.order > 2 else 1, self.order):
            if all(self._pow_poly(g, n // f) != 1 for f in factors):
                return g
        raise FieldError("no primitive element")

    def _find_generator_slow(self):
        return self._find_generator_table()

    def _mul_poly(self, a, b):
        p = self.p
        r = _poly_mulmod(_int_to_poly(a, p), _int_to_poly(b, p), list(self.modulus), p)
        return _poly_to_int(r, p)

    def _pow_poly(self, a, e):
        p = self.p
        r = _poly_powmod(_int_to_poly(a, p), e, list(self.modulus), p)
        return _poly_to_int(r, p)

    def _digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers) % self.p

    def _undigits(self, d):
        return (np.asarray(d, dtype=np.int64) * self._powers).sum(axis=-1)

    # -- validation helpers ---------------------------------------------------

    def __contains__(self, x):
        return isinstance(x, (int, np.integer)) and 0 <= int(x) < self.order

    def array(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise FieldError(f"values outside {self!r}")
        return arr

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, int(value))

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def random(self, shape=(), rng=None, nonzero=False) -> np.ndarray:
        rng = np.random.default_rng(rng)
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=shape, dtype=np.int64)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _is_scalar(*xs):
        return all(isinstance(x, (int, np.integer)) for x in xs)

    def add(self, a, b):
        if self.p == 2:
            if self._is_scalar(a, b):
                return int(a) ^ int(b)
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self._is_scalar(a, b):
            if self._tabled and self._add_table is not None:
                return int(self._add_table[a, b])
            return self._scalar_add(int(a), int(b))
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._tabled and self._add_table is not None:
            return self._add_table[a, b]
        return self._undigits((self._digits(a) + self._digits(b)) % self.p)

    def _scalar_add(self, a, b):
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a):
        if self.p == 2:
            return a if self._is_scalar(a) else np.asarray(a, dtype=np.int64).copy()
        if self._tabled:
            if self._is_scalar(a):
                return self._neg_l[a]
            return self._neg[np.asarray(a, dtype=np.int64)]
        if self._is_scalar(a):
            return int(self._undigits((self.p - self._digits(a)) % self.p))
        return self._undigits((self.p - self._digits(a)) % self.p)

    def sub(self, a, b):
        if self.p == 2:
            return self.add(a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not self._tabled:
            return self._vectorize(self._mul_poly, a, b)
        if self._is_scalar(a, b):
            if a == 0 or b == 0:
                return 0
            return self._exp_l[self._log_l[a] + self._log_l[b]]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        if self._is_scalar(a):
            if a == 0:
                raise ZeroElementError(f"inverse of zero in {self!r}")
            if not self._tabled:
                return self._pow_poly(int(a), self.order - 2)
            return self._exp_l[(self.order - 1 - self._log_l[a]) % (self.order - 1)]
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroElementError(f"inverse of zero in {self!r}")
        if not self._tabled:
            return self._vectorize(lambda x: self._pow_poly(x, self.order - 2), a)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        """``a**e``; negative exponents invert, and ``0**0 == 1``."""
        e = int(e)
        if e < 0:
            return self.power(self.inv(a), -e)
        n = self.order - 1
        if not self._tabled:
            return self._vectorize(lambda x: self._pow_poly(x, e), a)
        if self._is_scalar(a):
            if a == 0:
                return 1 if e == 0 else 0
            return self._exp_l[(self._log_l[a] * (e % n)) % n]
        a = np.asarray(a, dtype=np.int64)
        out = self._exp[(self._log[a] * (e % n)) % n]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def _vectorize(self, fn, *args):
        if self._is_scalar(*args):
            return fn(*(int(x) for x in args))
        return np.frompyfunc(lambda *xs: fn(*(int(x) for x in xs)), len(args), 1)(*args).astype(np.int64)

    def sum(self, a, axis=-1):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        a = np.moveaxis(a, axis, 0)
        if a.shape[0] == 0:
            return np.zeros(a.shape[1:], dtype=np.int64)
        acc = a[0]
        for x in a[1:]:
            acc = self.add(acc, x)
        return np.asarray(acc, dtype=np.int64)

    def matmul(self, a, b):
        """Matrix product over the field; broadcasts over leading axes like ``@``."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vec_a = a.ndim == 1
        vec_b = b.ndim == 1
        if vec_a:
            a = a[None, :]
        if vec_b:
            b = b[:, None]
        if a.shape[-1] != b.shape[-2]:
            raise ValueError(f"matmul shape mismatch {a.shape} @ {b.shape}")
        if a.shape[-1] == 0:
            shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
            out = np.zeros(shape, dtype=np.int64)
        else:
            prod = self.mul(a[..., :, :, None], b[..., None, :, :])
            out = self.sum(prod, axis=-2)
        if vec_a:
            out = out[..., 0, :]
        if vec_b:
            out = out[..., 0]
        return out

    # -- structure -------------------------------------------------------------

    def element_order(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroElementError("zero has no multiplicative order")
        n = self.order - 1
        e = n
        for f in prime_factors(n):
            while e % f == 0 and self.power(a, e // f) == 1:
                e //= f
        return e

    def is_primitive(self, a: int) -> bool:
        return a != 0 and self.element_order(a) == self.order - 1

    # -- subfield --------------------------------------------------------------

    def _need_subfield(self):
        if self.subfield_degree is None:
            raise NoSubfieldError(f"{self!r} has no designated subfield")

    @property
    def subfield(self) -> "GaloisField":
        """The designated subfield as a standalone field with its own modulus."""
        self._need_subfield()
        return self._subfield

    def _build_subfield(self):
        t = self.subfield_degree
        small = GF(self.p, t)
        self._subfield = small
        # norm-compatible root: g^((Q-1)/(q-1)) is a root of the small Conway polynomial
        root = self.power(self.generator, (self.order - 1) // (small.order - 1)) if small.order > 2 else 1
        if not self._is_root(small.modulus, root):
            root = next(x for x in self._subfield_members() if x and self._is_root(small.modulus, x))
        powers = [1]
        for _ in range(1, t):
            powers.append(self.mul(powers[-1], root))
        embed = np.zeros(small.order, dtype=np.int64)
        for v in range(small.order):
            acc = 0
            for j, c in enumerate(_int_to_poly(v, self.p)):
                for _ in range(c):
                    acc = self.add(acc, powers[j])
            embed[v] = acc
        self._embed = embed
        if self._tabled:
            restrict = np.full(self.order, -1, dtype=np.int64)
            restrict[embed] = np.arange(small.order)
            self._restrict = restrict
        else:
            self._restrict = {int(b): i for i, b in enumerate(embed)}
        self._build_expansion(root)

    def _subfield_members(self):
        q = self.p**self.subfield_degree
        return [x for x in range(self.order) if self.power(x, q) == x]

    def _is_root(self, coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), int(c))
        return acc == 0

    def _build_expansion(self, root):
        # columns: digits of root^j * x^k for k < M, j < t (GF(p)-basis of the big field)
        p, t, M = self.p, self.subfield_degree, self.m // self.subfield_degree
        cols = []
        for k in range(M):
            xk = p**k  # the integer p**k encodes the monomial x^k
            rj = 1
            for j in range(t):
                cols.append(self._digits(self.mul(rj, xk)))
                rj = self.mul(rj, root)
        basis = np.array(cols, dtype=np.int64).T  # m x m over GF(p)
        self._expand_matrix = _inverse_mod_p(basis, p)
        self._combine_matrix = basis

    def embed(self, small) -> np.ndarray:
        """Map standalone-subfield integers into this field."""
        self._need_subfield()
        if self._is_scalar(small):
            return int(self._embed[small])
        return self._embed[np.asarray(small, dtype=np.int64)]

    def restrict(self, big):
        """Inverse of :meth:`embed`; raises when an entry is outside the subfield."""
        self._need_subfield()
        if self._tabled:
            out = self._restrict[np.asarray(big, dtype=np.int64)]
            if np.any(out < 0):
                raise FieldError("element not in the designated subfield")
            return int(out) if self._is_scalar(big) else out
        try:
            if self._is_scalar(big):
                return self._restrict[int(big)]
            return np.vectorize(lambda x: self._restrict[int(x)])(big).astype(np.int64)
        except KeyError:
            raise FieldError("element not in the designated subfield") from None

    def in_subfield(self, a):
        self._need_subfield()
        if self._tabled:
            return self._restrict[np.asarray(a, dtype=np.int64)] >= 0
        return np.equal(self.power(a, self.q), a)

    def frobenius(self, a, t: int = 1):
        """``a**(q**t)`` for the designated subfield size ``q``."""
        self._need_subfield()
        if t < 0:
            raise FieldError("Frobenius power must be non-negative")
        e = pow(self.q, t, self.order - 1) if self.order > 2 else 1
        if t == 0:
            return a if self._is_scalar(a) else np.asarray(a, dtype=np.int64).copy()
        if e == 0:
            e = self.order - 1
        return self.power(a, e)

    def expand(self, a) -> np.ndarray:
        """Coordinates over GF(q) in the basis 1, x, ..., x^(M-1).

        Returns an array of shape ``a.shape + (M,)`` holding standalone-subfield
        integers.
        """
        self._need_subfield()
        p, t, M = self.p, self.subfield_degree, self.degree_over_subfield
        d = self._digits(a)
        coords = (d @ self._expand_matrix.T) % p
        coords = coords.reshape(coords.shape[:-1] + (M, t))
        return (coords * np.array([p**j for j in range(t)], dtype=np.int64)).sum(axis=-1)

    def combine(self, coords) -> np.ndarray:
        """Inverse of :meth:`expand`."""
        self._need_subfield()
        p, t, M = self.p, self.subfield_degree, self.degree_over_subfield
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape[-1] != M:
            raise FieldError(f"expected {M} coordinates")
        sub = (coords[..., None] // np.array([p**j for j in range(t)], dtype=np.int64)) % p
        flat = sub.reshape(coords.shape[:-1] + (M * t,))
        return self._undigits((flat @ self._combine_matrix.T) % p)

    def linearly_independent_over_subfield(self, elems: Iterable) -> bool:
        elems = [int(x) for x in elems]
        if not elems:
            return True
        if len(elems) > self.degree_over_subfield:
            self._need_subfield()
            return False
        coords = self.embed(self.expand(np.array(elems, dtype=np.int64)))  # len x M
        from .matrix import rank_array
        return rank_array(self, coords) == len(elems)


def _inverse_mod_p(a, p):
    a = np.array(a, dtype=np.int64) % p
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c]), None)
        if piv is None:
            raise FieldError("expansion basis is singular")
        aug[[c, piv]] = aug[[piv, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), p - 2, p) % p
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % p
    return aug[:, n:]


@functools.lru_cache(maxsize=64)
def GF(p: int, m: int = 1, modulus: Optional[tuple] = None,
       subfield_degree: Optional[int] = None) -> GaloisField:
    """Cached field factory; identical arguments give the identical object."""
    return GaloisField(p, m, modulus, subfield_degree)


def field_of_order(order: int, subfield_order: Optional[int] = None) -> GaloisField:
    """Field with ``order`` elements, e.g. ``field_of_order(4096, 8)`` for GF(8^4)."""
    pf = prime_factors(order)
    if len(pf) != 1:
        raise FieldError(f"{order} is not a prime power")
    p = pf[0]
    m = _exact_log(order, p)
    t = None
    if subfield_order is not None:
        if prime_factors(subfield_order) != [p]:
            raise FieldError(f"{subfield_order} is not a power of {p}")
        t = _exact_log(subfield_order, p)
    return GF(p, m, None, t)


class FieldElement:
    """An element bound to its field, with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: GaloisField, value: int):
        if not 0 <= value < field.order:
            raise FieldError(f"{value} is not an element of {field!r}")
        self.field = field
        self.value = int(value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFieldsError(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, int(other)).value
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.field, int(v))

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e):
        return self._wrap(self.field.power(self.value, int(e)))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"{self.field!r}({self.value})"

    def inverse(self):
        return self._wrap(self.field.inv(self.value))

    def order(self) -> int:
        return self.field.element_order(self.value)

    def frobenius(self, t: int = 1):
        return self._wrap(self.field.frobenius(self.value, t))
