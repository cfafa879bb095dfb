import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmds_regen.errors import FieldError, MixedFieldsError, NoSubfieldError, ZeroElementError
from pmds_regen.gf import (GF, GaloisField, conway_polynomial, is_irreducible,
                           smallest_prime_power_at_least)

from oracles import RefField, independent_by_combinations, sieve_prime_powers

SMALL_FIELDS = [(2, 1), (2, 3), (2, 4), (3, 2), (5, 1), (7, 1), (2, 8), (3, 3), (5, 2)]


def test_gf8_product_of_x_and_x_squared():
    F = GF(2, 3)
    assert list(F.modulus) == [1, 1, 0, 1]
    assert F.mul(2, 4) == 3


def test_prime_field_basics():
    F = GF(7)
    assert F.mul(3, 5) == 1
    assert F.add(6, 0) == 6
    assert F.div(1, 3) == 5


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_multiplication_matches_schoolbook(p, m):
    F = GF(p, m)
    ref = RefField(p, m, F.modulus)
    a, b = np.meshgrid(np.arange(F.order), np.arange(F.order))
    if F.order > 64:
        rng = np.random.default_rng(p * 100 + m)
        a, b = rng.integers(0, F.order, 2000), rng.integers(0, F.order, 2000)
    a, b = a.ravel(), b.ravel()
    got = F.mul(a, b)
    assert all(int(g) == ref.mul(int(x), int(y)) for g, x, y in zip(got, a, b))
    assert all(int(g) == ref.add(int(x), int(y)) for g, x, y in zip(F.add(a, b), a, b))


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_inverse_table_complete(p, m):
    F = GF(p, m)
    nz = np.arange(1, F.order)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)


def test_field_axioms_on_random_triples():
    for p, m in [(2, 12), (3, 5), (2, 10), (7, 3)]:
        F = GF(p, m)
        rng = np.random.default_rng(m)
        a, b, c = (F.random(10**4, rng=rng) for _ in range(3))
        assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
        assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
        assert np.array_equal(F.mul(a, b), F.mul(b, a))
        assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
        assert np.array_equal(F.sub(F.add(a, b), b), a)


def test_division_by_zero_and_mixed_fields():
    F = GF(2, 3)
    with pytest.raises(ZeroElementError):
        F.inv(0)
    with pytest.raises(ZeroElementError):
        F(3) / F(0)
    with pytest.raises(MixedFieldsError):
        F(1) + GF(2, 4)(1)


@pytest.mark.parametrize("p,m,a,expected", [(2, 3, 2, 7), (2, 2, 2, 3), (2, 4, 1, 1), (3, 2, 1, 1)])
def test_element_order(p, m, a, expected):
    F = GF(p, m)
    assert F.element_order(a) == expected
    assert F.element_order(a) == RefField(p, m, F.modulus).order_of(a)


def test_element_orders_divide_group_order():
    F = GF(3, 3)
    ref = RefField(3, 3, F.modulus)
    for a in range(1, F.order):
        o = F.element_order(a)
        assert (F.order - 1) % o == 0
        assert o == ref.order_of(a)
    with pytest.raises(ZeroElementError):
        F.element_order(0)


def test_frobenius_examples():
    F = GF(2, 2, subfield_degree=1)
    assert F.frobenius(2, 1) == 3
    assert F.frobenius(2, 0) == 2
    with pytest.raises(NoSubfieldError):
        GF(2, 2).frobenius(2, 1)


@pytest.mark.parametrize("p,m,t", [(2, 3, 1), (2, 4, 2), (2, 6, 3), (3, 4, 2), (2, 12, 4), (2, 12, 3)])
def test_frobenius_is_a_homomorphism_fixing_the_subfield(p, m, t):
    F = GF(p, m, subfield_degree=t)
    if F.order <= 64:
        a, b = np.meshgrid(np.arange(F.order), np.arange(F.order))
        a, b = a.ravel(), b.ravel()
    else:
        rng = np.random.default_rng(0)
        a, b = F.random(5000, rng=rng), F.random(5000, rng=rng)
    for k in (1, 2):
        assert np.array_equal(F.frobenius(F.add(a, b), k), F.add(F.frobenius(a, k), F.frobenius(b, k)))
        assert np.array_equal(F.frobenius(F.mul(a, b), k), F.mul(F.frobenius(a, k), F.frobenius(b, k)))
    sub = F.embed(np.arange(F.q))
    assert np.array_equal(F.frobenius(sub, 1), sub)
    assert np.array_equal(F.frobenius(a, m // t), a)


def test_subfield_embedding_is_a_homomorphism():
    F = GF(2, 6, subfield_degree=3)
    small = F.subfield
    x, y = np.meshgrid(np.arange(8), np.arange(8))
    x, y = x.ravel(), y.ravel()
    assert np.array_equal(F.embed(small.mul(x, y)), F.mul(F.embed(x), F.embed(y)))
    assert np.array_equal(F.embed(small.add(x, y)), F.add(F.embed(x), F.embed(y)))
    assert np.array_equal(F.restrict(F.embed(x)), x)
    assert int(F.in_subfield(F.embed(np.arange(8))).sum()) == 8
    assert int(F.in_subfield(np.arange(64)).sum()) == 8
    with pytest.raises(FieldError):
        F.restrict(np.array([int(np.nonzero(~F.in_subfield(np.arange(64)))[0][0])]))


def test_expand_combine_round_trip():
    F = GF(3, 4, subfield_degree=2)
    a = np.arange(F.order)
    coords = F.expand(a)
    assert coords.shape == (81, 2)
    assert np.array_equal(F.combine(coords), a)
    # expansion is GF(q)-linear
    c = F.embed(np.array([2]))[0]
    lhs = F.expand(F.mul(c, a))
    rhs = F.subfield.mul(2, coords)
    assert np.array_equal(lhs, rhs)


def test_linear_independence_examples():
    F = GF(2, 4, subfield_degree=1)
    assert F.linearly_independent_over_subfield([1])
    assert F.linearly_independent_over_subfield([1, 2, 4, 8])
    G = GF(2, 4, subfield_degree=2)
    c = int(G.embed(np.array([3]))[0])
    assert not G.linearly_independent_over_subfield([5, G.mul(c, 5)])
    with pytest.raises(NoSubfieldError):
        GF(2, 4).linearly_independent_over_subfield([1, 2])


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (2, 5)])
def test_linear_independence_matches_brute_force(p, m):
    F = GF(p, m, subfield_degree=1)
    rng = np.random.default_rng(p + m)
    for size in range(1, 5):
        for _ in range(40):
            elems = [int(x) for x in F.random(size, rng=rng)]
            digits = [[(e // p**i) % p for i in range(m)] for e in elems]
            assert F.linearly_independent_over_subfield(elems) == independent_by_combinations(digits, p)


@pytest.mark.parametrize("bound,char,expected", [(86, None, (89, 1)), (86, 2, (2, 7)), (2, None, (2, 1)),
                                                  (90, None, (97, 1)), (100, 2, (2, 7)), (120, None, (11, 2))])
def test_smallest_prime_power(bound, char, expected):
    assert smallest_prime_power_at_least(bound, char) == expected


def test_smallest_prime_power_against_sieve():
    powers = sieve_prime_powers(3000)
    for bound in range(2, 2500, 7):
        p, m = smallest_prime_power_at_least(bound)
        assert p**m == min(x for x in powers if x >= bound)


def test_conway_polynomials_known_values():
    # published Conway polynomials, little-endian
    assert conway_polynomial(2, 8) == (1, 0, 1, 1, 1, 0, 0, 0, 1)
    assert conway_polynomial(3, 2) == (2, 2, 1)
    assert conway_polynomial(2, 6) == (1, 1, 0, 1, 1, 0, 1)
    assert conway_polynomial(3, 6) == (2, 2, 1, 0, 2, 0, 1)
    assert conway_polynomial(5, 2) == (2, 4, 1)


def test_moduli_are_irreducible():
    for p, m in SMALL_FIELDS + [(2, 12), (3, 6), (2, 16)]:
        assert is_irreducible(GF(p, m).modulus, p)
    with pytest.raises(FieldError):
        GaloisField(2, 2, modulus=[1, 0, 1])
    with pytest.raises(FieldError):
        GaloisField(2, 4, subfield_degree=3)
    with pytest.raises(FieldError):
        GaloisField(4, 1)


def test_descriptor_round_trip():
    F = GF(2, 6, subfield_degree=2)
    G = GaloisField.from_descriptor(F.descriptor())
    assert G == F and G.subfield_degree == 2
    assert set(F.descriptor()) == {"p", "m", "modulus", "subfield_degree"}


def test_array_validation():
    F = GF(5)
    with pytest.raises(FieldError):
        F.array([1, 5])
    with pytest.raises(FieldError):
        F.array([-1])


def test_large_field_falls_back_to_polynomials():
    F = GF(2, 24)
    ref = RefField(2, 24, F.modulus)
    rng = np.random.default_rng(3)
    a, b = (int(x) for x in rng.integers(1, F.order, 2))
    assert int(F.mul(a, b)) == ref.mul(a, b)
    assert int(F.mul(a, F.inv(a))) == 1


def test_field_element_wrapper():
    F = GF(2, 3)
    x = F(2)
    assert int(x * x * x) == 3
    assert int(x ** 7) == 1
    assert int(x ** -1 * x) == 1
    assert x.order() == 7
    assert int(-x) == 2 and int(x - x) == 0


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_gf256_distributive(a, b, c):
    F = GF(2, 8)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@given(st.integers(1, 728), st.integers(-20, 20))
def test_power_laws_gf729(a, e):
    F = GF(3, 6)
    assert F.mul(F.power(a, e), F.power(a, 3)) == F.power(a, e + 3)


@given(st.integers(0, 4095), st.integers(0, 4095))
def test_frobenius_additive_gf4096(a, b):
    F = GF(2, 12, subfield_degree=3)
    assert F.frobenius(F.add(a, b), 1) == F.add(F.frobenius(a, 1), F.frobenius(b, 1))
