import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmds_regen.errors import (DimensionMismatchError, FieldTooSmallError, InvalidParametersError,
                               SearchExhaustedError)
from pmds_regen.gf import GF
from pmds_regen.matrix import rank_array
from pmds_regen.mds import LinearCode, random_mds_code, rs_code
from pmds_regen.sizes import ParamPoint, field_size_bounds
from pmds_regen.universal import (UniversalFamily, build_universal_msr_pmds, family_apply, family_code,
                                  find_alpha_set, independent_subsets, local_repair_expanded,
                                  scalar_pmds, verify_alpha_set)
from pmds_regen.verify import certify_msr_bandwidth, certify_pmds
from pmds_regen.yebarg import build_yebarg, repair_node


@pytest.fixture(scope="module")
def big():
    return GF(2, 18, None, 3)  # GF(8^6)


@pytest.fixture(scope="module")
def f4096():
    return GF(2, 12, None, 3)  # GF(8^4)


@pytest.fixture(scope="module")
def f256():
    return GF(2, 8, None, 1)


def local_rs(field, n, r):
    return rs_code(field.subfield, list(range(1, n + 1)), n - r)


PARAMS = [(3, 1, 1), (3, 1, 2), (3, 2, 1), (4, 1, 1), (4, 1, 2), (4, 2, 1), (4, 2, 2)]


@pytest.mark.parametrize("kind", ["gabidulin", "gabrys"])
@pytest.mark.parametrize("n,r,s", PARAMS)
def test_scalar_family_code_is_pmds(big, kind, n, r, s):
    fam = UniversalFamily(kind, big, 2, n, r, s)
    cert = certify_pmds(scalar_pmds(fam, local_rs(big, n, r)), budget=None)
    assert cert and cert.mode == "exhaustive"


def test_gabrys_scalar_small_field(f256):
    fam = UniversalFamily("gabrys", f256, 2, 3, 1, 2)
    local = LinearCode(f256.subfield, np.array([[1, 1, 1]]))
    assert certify_pmds(scalar_pmds(fam, local), budget=None)


@pytest.mark.parametrize("kind", ["gabidulin", "gabrys"])
def test_zero_message_gives_zero_row(big, kind):
    fam = UniversalFamily(kind, big, 2, 4, 2, 2)
    k = family_code(fam, local_rs(big, 4, 2)).k
    assert not np.any(family_apply(fam, local_rs(big, 4, 2), np.zeros(k, dtype=np.int64)))


@pytest.mark.parametrize("kind", ["gabidulin", "gabrys"])
def test_groups_satisfy_local_checks(big, kind, rng):
    fam = UniversalFamily(kind, big, 2, 4, 1, 2)
    local = local_rs(big, 4, 1)
    code = family_code(fam, local)
    for _ in range(5):
        row = family_apply(fam, local, big.random(code.k, rng))
        assert code.contains(row)
        for g in range(2):
            part = row[g * 4:(g + 1) * 4]
            assert not np.any(big.matmul(big.embed(local.H), part))


def test_universality_two_local_codes(big):
    fam = UniversalFamily("gabrys", big, 2, 4, 2, 2)
    small = big.subfield
    codes = [local_rs(big, 4, 2), random_mds_code(small, 4, 2, seed=3)]
    assert not np.array_equal(codes[0].H, codes[1].H)
    for local in codes:
        c = family_code(fam, local)
        emb = big.embed(local.G)
        for g in range(2):
            part = c.G[:, g * 4:(g + 1) * 4]
            assert rank_array(big, part) == 2
            assert rank_array(big, np.vstack([part, emb])) == 2
    other = family_code(fam, codes[1])
    assert any(not family_code(fam, codes[0]).contains(row) for row in other.G)


def test_gabrys_rows_are_frobenius_powers(big):
    fam = UniversalFamily("gabrys", big, 2, 4, 1, 2)
    rows = fam.global_rows
    assert np.array_equal(rows[1], big.frobenius(rows[0], 1))


def test_gabidulin_needs_degree(f4096):
    with pytest.raises(FieldTooSmallError):
        UniversalFamily("gabidulin", f4096, 3, 4, 2, 2)


def test_local_code_checks(big):
    fam = UniversalFamily("gabrys", big, 2, 4, 2, 2)
    with pytest.raises(DimensionMismatchError):
        family_code(fam, local_rs(big, 4, 1))
    with pytest.raises(InvalidParametersError):
        family_code(fam, LinearCode(big.subfield, np.array([[1, 1, 0, 0], [0, 0, 1, 1]])))


def test_gabidulin_msr_parameters(f4096):
    fam = UniversalFamily("gabidulin", f4096, 2, 4, 2, 2)
    code = build_universal_msr_pmds(fam, 4, 2, 3)
    assert (code.field.order, code.field.q, code.ell) == (4096, 8, 16)
    qb = field_size_bounds(ParamPoint(2, 4, 2, 2, 3), "B")[0]
    assert qb == 8**4 == code.field.order


def test_gabrys_target_size():
    lo, _ = field_size_bounds(ParamPoint(2, 4, 2, 2, 3), "D")
    assert lo == 4 * 2 * (4 * 2)**(2 * 3 - 1)


def test_expanded_repair(f4096, rng):
    fam = UniversalFamily("gabidulin", f4096, 2, 4, 2, 2)
    code = build_universal_msr_pmds(fam, 4, 2, 3)
    w = code.encode(code.random_message(rng))
    for i in range(8):
        col, tr = local_repair_expanded(code, w.erase([i]), i)
        assert np.array_equal(col, w.data[:, i])
        assert tr.total == 96 == tr.bound
        assert tr.symbol_field == repr(f4096.subfield)
    naive = code.expansion_degree * (code.n - code.r) * code.ell
    assert naive == 128 and tr.total < naive


def test_expanded_repair_degree_one(rng):
    # M = 1: expansion is the identity and repair is plain Ye-Barg repair
    field = GF(2, 3, None, 3)
    yb = build_yebarg(field, 4, 2, 3)
    w = yb.encode(yb.random_message(rng))
    expanded = field.expand(w.data)
    assert expanded.shape[-1] == 1
    col, tr = repair_node(yb, expanded[:, :, 0], 2)
    assert np.array_equal(col, w.data[:, 2])
    assert tr.total == 24


def test_msr_certificate(f4096):
    fam = UniversalFamily("gabidulin", f4096, 2, 4, 2, 2)
    code = build_universal_msr_pmds(fam, 4, 2, 3)
    cert = certify_msr_bandwidth(code, "local", trials=1)
    assert cert and cert.details["bandwidth"] == 96


def test_array_code_is_pmds(f4096):
    fam = UniversalFamily("gabidulin", f4096, 2, 4, 2, 2)
    code = build_universal_msr_pmds(fam, 4, 2, 3)
    assert certify_pmds(code, budget=None)


def test_subfield_too_small_for_msr(f256):
    fam = UniversalFamily("gabrys", f256, 2, 3, 1, 2)
    with pytest.raises(FieldTooSmallError):
        build_universal_msr_pmds(fam, 3, 1, 2)


def test_greedy_alpha_set(f256):
    alphas = find_alpha_set(f256, 2, 3, 1, 2, seed=0)
    assert alphas.shape == (2, 3)
    assert independent_subsets(f256, alphas.ravel(), 4).all()
    assert len(independent_subsets(f256, alphas.ravel(), 4)) == 15
    assert alphas.tolist() == [[217, 163, 131], [69, 79, 11]]


def test_alpha_set_seed_determinism(f256):
    a = find_alpha_set(f256, 2, 3, 1, 2, seed=7)
    b = find_alpha_set(f256, 2, 3, 1, 2, seed=7)
    assert np.array_equal(a, b)


def test_basis_alpha_set(big):
    alphas = find_alpha_set(big, 2, 3, 1, 2, strategy="basis")
    assert big.linearly_independent_over_subfield(alphas.ravel())
    with pytest.raises(SearchExhaustedError):
        find_alpha_set(big, 2, 4, 1, 2, strategy="basis")


def test_code_alpha_set(big):
    alphas = find_alpha_set(big, 2, 4, 2, 2, strategy="code")
    assert verify_alpha_set(big, alphas.ravel(), 6) == "exhaustive"


def test_alpha_set_impossible(f256):
    with pytest.raises(SearchExhaustedError):
        find_alpha_set(f256, 2, 4, 3, 3)


def test_dependent_alphas_rejected(f256):
    with pytest.raises(InvalidParametersError):
        UniversalFamily("gabrys", f256, 2, 3, 1, 2, alphas=[[1, 2, 3], [4, 8, 16]])


def test_descriptor_round_trip(f4096):
    from pmds_regen.registry import code_from_descriptor
    fam = UniversalFamily("gabrys", f4096, 2, 4, 1, 1, seed=2)
    code = build_universal_msr_pmds(fam, 4, 1, 3)
    back = code_from_descriptor(code.descriptor())
    assert np.array_equal(back.parity_stack(), code.parity_stack())
    assert back.family.verification == "exhaustive"


@given(seed=st.integers(0, 2**32 - 1))
def test_family_rows_are_codewords(seed):
    field = GF(2, 8, None, 2)
    rng = np.random.default_rng(seed)
    fam = UniversalFamily("gabidulin", field, 2, 3, 1, 1)
    local = random_mds_code(field.subfield, 3, 2, seed=int(rng.integers(1 << 30)))
    code = family_code(fam, local)
    row = family_apply(fam, local, field.random(code.k, rng))
    assert code.contains(row)
