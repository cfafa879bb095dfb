import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmds_regen.arrays import cut_set_bound
from pmds_regen.errors import (DependentLocatorsError, FieldTooSmallError, InvalidParametersError,
                               NoGroupingError, RepairError)
from pmds_regen.gf import GF
from pmds_regen.globalmsr import (GroupingTable, _moore_stack, build_global_msr_pmds, build_grouping_matrix,
                                  build_skew_yebarg, default_inner_code, find_grouping, global_repair,
                                  puncture_and_certify_global, subspace_tuples, transform_matrix)
from pmds_regen.matrix import block_diag, inverse_array, rank_array
from pmds_regen.mds import LinearCode, certify_mds
from pmds_regen.sizes import gaussian_binomial, global_subpacketization
from pmds_regen.verify import certify_msr_bandwidth, certify_pmds


@pytest.fixture(scope="module")
def f64():
    return GF(2, 6, None, 1)


@pytest.fixture(scope="module")
def f729():
    return GF(3, 6, None, 1)


@pytest.fixture(scope="module")
def small_code(f64):
    # mu=2, n=3, r=1, s=2 over GF(2^6)/GF(2): inner code is the [3,2] parity code
    return build_global_msr_pmds(f64, 2, 3, 1, 2)


def random_invertible(q_field, n, rng):
    while True:
        a = q_field.random((n, n), rng)
        if rank_array(q_field, a) == n:
            return a


# -- skew Ye-Barg codes --------------------------------------------------------

def test_single_row_is_gabidulin(f64):
    skew = build_skew_yebarg(f64, [[1, 2, 4, 8]], 2)
    assert skew.ell == 1
    assert certify_mds(skew.row_code(0))


def test_all_row_codes_mds(f64):
    B = build_grouping_matrix(f64, 2, 3, 1, 1)
    skew = build_skew_yebarg(f64, B, 2)
    for a in range(skew.ell):
        assert certify_mds(skew.row_code(a))


def test_repeated_entry_is_dependent(f64):
    with pytest.raises(DependentLocatorsError) as info:
        build_skew_yebarg(f64, [[1, 2, 4], [1, 2, 2]], 1)
    assert info.value.row == 1


# -- groupings -----------------------------------------------------------------

def test_s1_groups_are_singletons(f64):
    B = np.array([[1, 2], [3, 2], [5, 4]])
    g = find_grouping(f64, B, 0, 1)
    assert g.groups.tolist() == [[0], [1], [2]]
    with pytest.raises(NoGroupingError):
        find_grouping(f64, np.array([[0, 2]]), 0, 1)


def test_ternary_single_vector_blocks(f729):
    # q=3, n-r=1, s=2, mu=2: 8 vectors per block, 64 rows
    B = build_grouping_matrix(f729, 2, 2, 1, 2)
    assert B.shape == (64, 2)
    assert global_subpacketization(3, 2, 1, 2) == 64
    for col in range(2):
        g = find_grouping(f729, B, col, 2)
        assert g.groups.shape == (32, 2)
        assert sorted(g.groups.ravel().tolist()) == list(range(64))
        other = 1 - col
        assert np.all(B[g.groups[:, 0], other] == B[g.groups[:, 1], other])
        pairs = B[g.groups, col]
        assert all(f729.linearly_independent_over_subfield(p) for p in pairs)


def test_binary_classes_of_three_have_no_grouping(f64):
    B = build_grouping_matrix(f64, 3, 2, 1, 2)
    assert B.shape[0] == 27
    with pytest.raises(NoGroupingError) as info:
        find_grouping(f64, B, 0, 2)
    assert "3 rows" in str(info.value) and info.value.column == 0


def test_grouping_table_json():
    g = GroupingTable(2, np.array([[0, 3], [1, 2]]))
    back = GroupingTable.from_json(g.to_json())
    assert back.column == 2 and np.array_equal(back.groups, g.groups)


@pytest.mark.parametrize("q,k,s", [(2, 1, 1), (3, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 2, 1)])
def test_tuple_count_matches_formula(q, k, s):
    field = GF(q, 1)
    D = k + s - 1
    count = len(subspace_tuples(field, D, k))
    assert count == gaussian_binomial(D, k, q) * math.prod(q**k - q**t for t in range(k))
    if k == 1 and s == 1:
        assert count == q - 1


def test_degree_too_small(f64):
    with pytest.raises(FieldTooSmallError):
        build_grouping_matrix(f64, 2, 4, 1, 2)


@pytest.mark.parametrize("mu,n,r,s,field_args", [(2, 2, 1, 2, (3, 6)), (2, 3, 1, 2, (2, 6)),
                                                 (2, 3, 1, 1, (2, 4))])
def test_scrambled_grouping(mu, n, r, s, field_args, rng):
    field = GF(*field_args, None, 1)
    B = build_grouping_matrix(field, mu, n, r, s)
    k = n - r
    for _ in range(10):
        T = block_diag([random_invertible(field.subfield, k, rng) for _ in range(mu)])
        scrambled = field.matmul(B, field.embed(T))
        for col in range(mu * k):
            find_grouping(field, scrambled, col, s)


# -- the global construction ---------------------------------------------------

def test_small_code_shape(small_code):
    assert small_code.ell == 1764
    assert small_code.field.subfield.order == 2


def test_zero_message(small_code):
    w = small_code.encode(np.zeros((small_code.ell, small_code.row_dimension), dtype=np.int64))
    assert not np.any(w.data)


def test_groups_lie_in_inner_span(small_code, rng):
    w = small_code.encode(small_code.random_message(rng))
    H = small_code.H_mds
    for g in range(2):
        part = w.data[:, g * 3:(g + 1) * 3]
        assert not np.any(small_code.field.matmul(part, H.T))


def test_row_generators_match_parity(small_code):
    rows = np.arange(0, small_code.ell, 97)
    gen = small_code.row_generators(rows)
    par = small_code.parity_stack(rows)
    assert not np.any(small_code.field.matmul(par, gen.transpose(0, 2, 1)))


def test_small_code_is_pmds(small_code):
    assert certify_pmds(small_code, budget=None)


def test_all_patterns_puncture(small_code):
    pats = small_code.puncture_patterns()
    assert len(pats) == 9
    for pat in pats:
        skew = small_code.punctured(pat)
        assert set(skew.groupings) == {0, 1, 2, 3}
        for a in range(0, skew.ell, 211):
            assert certify_mds(skew.row_code(a))


def test_global_repair_every_column(small_code):
    cert = certify_msr_bandwidth(small_code, "global", trials=2)
    assert cert
    assert cert.details["bandwidth"] == 3 * small_code.ell // 2 == 2646
    assert (small_code.mu * (small_code.n - small_code.r) - small_code.s) * small_code.ell == 3528


def test_global_repair_many_words(small_code, rng):
    pat = ((0,), (4,))
    for _ in range(20):
        w = small_code.encode(small_code.random_message(rng))
        for node in (1, 2, 3, 5):
            col, tr = small_code.global_repair(w, pat, node)
            assert np.array_equal(col, w.data[:, node])
            assert tr.total == tr.bound == cut_set_bound(4, 2, 3, small_code.ell)


def test_repair_of_punctured_node(small_code, rng):
    w = small_code.encode(small_code.random_message(rng))
    with pytest.raises(RepairError):
        small_code.global_repair(w, ((0,), (4,)), 0)


def test_grouping_mismatch(small_code, rng):
    w = small_code.encode(small_code.random_message(rng))
    skew = small_code.punctured(((0,), (3,)))
    with pytest.raises(RepairError):
        global_repair(skew, skew.groupings[1], w.data[:, [1, 2, 4, 5]], 0)


def test_single_parity_repair(rng):
    field = GF(2, 4, None, 1)
    code = build_global_msr_pmds(field, 2, 3, 1, 1)
    assert code.ell == 36
    w = code.encode(code.random_message(rng))
    col, tr = code.global_repair(w, ((2,), (5,)), 0)
    assert np.array_equal(col, w.data[:, 0])
    assert tr.total == 3 * 36
    assert all(len(g) == 1 for g in code.punctured(((2,), (5,))).groupings[0].groups)


def test_transform_consistency_literal_inverse_fails(small_code):
    # without the transpose the predicted locators do not annihilate the punctured rows
    pat = ((1,), (3,))
    field = small_code.field
    T = transform_matrix(small_code, pat)
    wrong = field.matmul(small_code.B, field.embed(inverse_array(field.subfield, T)))
    right = puncture_and_certify_global(small_code, pat).B
    survivors = [0, 2, 4, 5]
    gen = small_code.row_generators(np.arange(50))[:, :, survivors]
    ok = field.matmul(_moore_stack(field, right[:50], 2), gen.transpose(0, 2, 1))
    bad = field.matmul(_moore_stack(field, wrong[:50], 2), gen.transpose(0, 2, 1))
    assert not np.any(ok) and np.any(bad)


def test_inner_code_choices(f64, f729):
    inner = default_inner_code(f64, 3, 1)  # n = q + 1: doubly extended
    assert certify_mds(inner) and inner.H.shape == (1, 3)
    assert certify_mds(default_inner_code(f729, 3, 1))
    with pytest.raises(FieldTooSmallError):
        default_inner_code(f64, 4, 1)


def test_non_systematic_inner_rejected(f64):
    inner = LinearCode(f64.subfield, np.array([[1, 1, 1]]))
    code = build_global_msr_pmds(f64, 2, 3, 1, 2, inner=inner)
    assert code.ell == 1764
    with pytest.raises(InvalidParametersError):
        build_global_msr_pmds(f64, 2, 3, 1, 2, inner=LinearCode(f64.subfield, np.array([[1, 0, 1], [0, 1, 1]])))


def test_ell_not_divisible(f64):
    B = build_grouping_matrix(f64, 2, 3, 1, 2)[:5]
    with pytest.raises(InvalidParametersError):
        build_global_msr_pmds(f64, 2, 3, 1, 2, B=B)


def test_bad_pattern(small_code):
    with pytest.raises(InvalidParametersError):
        transform_matrix(small_code, ((0, 1), (3,)))


def test_reference_configuration_one_pattern(f729, rng):
    code = build_global_msr_pmds(f729, 2, 3, 1, 2)
    assert code.ell == 389_376 == global_subpacketization(3, 2, 2, 2)
    w = code.encode(code.random_message(rng))
    col, tr = code.global_repair(w, ((0,), (3,)), 4)
    assert np.array_equal(col, w.data[:, 4])
    assert tr.total == 3 * code.ell // 2 == 584_064


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_repair_random_pattern(seed, data):
    field = GF(2, 6, None, 1)
    code = build_global_msr_pmds(field, 2, 3, 1, 2)
    pat = data.draw(st.sampled_from(code.puncture_patterns()))
    erased = {c for e in pat for c in e}
    node = data.draw(st.sampled_from([c for c in range(6) if c not in erased]))
    w = code.encode(code.random_message(np.random.default_rng(seed)))
    col, _ = code.global_repair(w, pat, node)
    assert np.array_equal(col, w.data[:, node])
