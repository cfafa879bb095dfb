import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmds_regen.errors import DuplicateLocatorError, UnrecoverableError, WordNotInCodeError
from pmds_regen.gf import GF
from pmds_regen.mds import (LinearCode, certify_mds, decode_rows, erasure_decode, minimum_distance,
                            random_mds_code, rs_code)


def brute_min_distance(code):
    F = code.field
    best = code.n + 1
    for msg in itertools.product(range(F.order), repeat=code.k):
        if any(msg):
            w = code.encode(np.array(msg))
            best = min(best, int(np.count_nonzero(w)))
    return best


def test_full_space_code():
    F = GF(5)
    c = rs_code(F, [1, 2, 3], 3)
    assert c.H.shape == (0, 3) and c.k == 3
    assert certify_mds(c)


def test_rs_4_2_over_gf5():
    c = rs_code(GF(5), [1, 2, 3, 4], 2)
    assert (c.n, c.k) == (4, 2)
    assert certify_mds(c)
    assert brute_min_distance(c) == 3 == minimum_distance(c)


def test_length_two_repetition():
    c = rs_code(GF(2), [0, 1], 1)
    words = {tuple(c.encode(np.array([m]))) for m in range(2)}
    assert words == {(0, 0), (1, 1)}
    assert certify_mds(c)


def test_duplicate_locators():
    with pytest.raises(DuplicateLocatorError):
        rs_code(GF(5), [1, 1, 2], 1)


def test_non_mds_example():
    c = LinearCode(GF(2), [[1, 0, 1], [0, 1, 0]])
    assert not certify_mds(c)
    assert brute_min_distance(c) < 3


def test_generator_is_canonical():
    c = rs_code(GF(7), [0, 1, 2, 3, 4], 3)
    assert not np.any(c.field.matmul(c.H, c.G.T))
    assert np.array_equal(c.G[:, :3], np.eye(3, dtype=np.int64))


def test_erasure_decode_all_masks():
    c = rs_code(GF(5), [1, 2, 3, 4], 2)
    rng = np.random.default_rng(0)
    for _ in range(5):
        word = c.encode(c.field.random(2, rng=rng))
        assert np.array_equal(erasure_decode(c, word, []), word)
        for er in itertools.combinations(range(4), 2):
            damaged = word.copy()
            damaged[list(er)] = 0
            assert np.array_equal(erasure_decode(c, damaged, er), word)
            mask = np.zeros(4, dtype=bool)
            mask[list(er)] = True
            assert np.array_equal(erasure_decode(c, damaged, mask), word)
        with pytest.raises(UnrecoverableError):
            erasure_decode(c, word, [0, 1, 2])


def test_word_not_in_code():
    c = rs_code(GF(5), [1, 2, 3, 4], 2)
    with pytest.raises(WordNotInCodeError):
        erasure_decode(c, np.array([1, 0, 0, 0]), [])


def test_random_mds_code_is_deterministic_and_certified():
    F = GF(5)
    c1 = random_mds_code(F, 4, 2, seed=1)
    c2 = random_mds_code(F, 4, 2, seed=1)
    assert np.array_equal(c1.H, c2.H)
    assert c1.H.tolist() == [[4, 1, 2, 4], [2, 1, 3, 0]]  # golden value
    for seed in range(20):
        assert certify_mds(random_mds_code(GF(2, 3), 6, 3, seed=seed))


def test_certify_matches_brute_force_distance():
    F = GF(3)
    rng = np.random.default_rng(5)
    for _ in range(40):
        h = F.random((2, 4), rng=rng)
        try:
            c = LinearCode(F, h)
        except Exception:
            continue
        assert certify_mds(c) == (brute_min_distance(c) == 3)


def test_decode_rows_reports_failures():
    F = GF(2, 3)
    c = rs_code(F, [1, 2, 3, 4, 5], 3)
    rng = np.random.default_rng(1)
    words = c.encode(F.random((10, 3), rng=rng))
    filled, ok = decode_rows(F, c.H, np.where(np.arange(5) < 2, 0, words), [0, 1])
    assert ok.all() and np.array_equal(filled, words)
    _, ok = decode_rows(F, c.H, words, [0, 1, 2])
    assert not ok.any()


def test_json_round_trip():
    c = rs_code(GF(2, 4), [1, 2, 3, 4, 5, 6], 4)
    d = LinearCode.from_json(c.to_json())
    assert np.array_equal(d.H, c.H) and d.field == c.field


@given(st.integers(2, 7), st.data())
def test_any_redundancy_many_erasures_recoverable(n, data):
    F = GF(2, 3)
    k = data.draw(st.integers(1, n))
    locs = data.draw(st.permutations(range(8)))[:n]
    c = rs_code(F, locs, k)
    msg = np.array(data.draw(st.lists(st.integers(0, 7), min_size=k, max_size=k)))
    word = c.encode(msg)
    er = data.draw(st.lists(st.integers(0, n - 1), max_size=n - k, unique=True))
    damaged = word.copy()
    damaged[er] = 0
    assert np.array_equal(erasure_decode(c, damaged, er), word)
