import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from becldpc.decode import (
    DecodeStatus,
    ErasureWord,
    SwmlConfig,
    bp_peel,
    ml_decode,
    swml_decode,
)
from becldpc.errors import ContractViolation, DecodingInvariantError
from becldpc.gf2 import BitMatrix, nullspace
from becldpc.qc import DegreeMatrix, QcCode, load_fixture

from conftest import contains_stopping_set_table, oracle_codewords, oracle_rank, oracle_spectrum, random_matrix


def _erase(word, mask):
    return ErasureWord.from_codeword(word, np.asarray(mask, dtype=bool))


def _random_codeword(h: BitMatrix, rng):
    basis = nullspace(h).to_dense()
    if basis.shape[0] == 0:
        return np.zeros(h.cols, dtype=np.uint8)
    return (rng.integers(0, 2, basis.shape[0]) @ basis % 2).astype(np.uint8)


def _mask_bits(m, n):
    return np.array([(m >> j) & 1 for j in range(n)], dtype=bool)


def test_no_erasures_is_immediate():
    h = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    word = _erase([0, 0, 0], [0, 0, 0])
    for dec in (bp_peel, ml_decode):
        res = dec(h, word)
        assert res.status is DecodeStatus.RECOVERED
        assert res.stats.erasures_resolved == 0 and res.stats.windows_solved == 0


def test_peel_single_middle_bit():
    h = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    res = bp_peel(h, _erase([0, 0, 0], [0, 1, 0]))
    assert res.status is DecodeStatus.RECOVERED
    assert res.word.bits[1] == 0 and res.stats.peel_resolved == 1


def test_peel_values_follow_the_codeword():
    h = BitMatrix.from_dense([[1, 1, 0, 1], [0, 1, 1, 1]])
    cw = np.array([1, 1, 1, 0], dtype=np.uint8)
    assert not (h.to_dense() @ cw % 2).any()
    res = bp_peel(h, _erase(cw, [1, 0, 1, 0]))
    np.testing.assert_array_equal(res.word.bits, cw)


def test_ml_recovers_when_peeling_stalls():
    # both checks see two erasures, yet the 2x2 system is invertible
    h = BitMatrix.from_dense([[1, 1, 1, 0], [1, 0, 1, 1], [0, 1, 1, 1]])
    cw = oracle_codewords(h.to_dense())[-1]
    word = _erase(cw, [1, 1, 1, 0])
    assert bp_peel(h, word).status is DecodeStatus.FAILED
    res = ml_decode(h, word)
    assert res.status is DecodeStatus.RECOVERED
    np.testing.assert_array_equal(res.word.bits, cw)


def test_ml_matches_rank_oracle_on_every_pattern():
    rng = np.random.default_rng(12)
    while True:
        dense = random_matrix(rng, 8, 12, 0.35)
        if oracle_rank(dense) == 8:
            break
    h = BitMatrix.from_dense(dense)
    zero = np.zeros(12, dtype=np.uint8)
    for m in range(1 << 12):
        mask = _mask_bits(m, 12)
        res = ml_decode(h, _erase(zero, mask))
        expect = oracle_rank(dense[:, mask]) == mask.sum()
        assert (res.status is DecodeStatus.RECOVERED) == expect
        assert not res.word.bits.any()


@pytest.mark.parametrize("seed, rows, cols", [(1, 6, 12), (2, 8, 14), (3, 5, 15), (4, 9, 16)])
def test_peeling_fails_exactly_on_stopping_sets(seed, rows, cols):
    rng = np.random.default_rng(seed)
    dense = random_matrix(rng, rows, cols, 0.3)
    table = contains_stopping_set_table(dense)
    h = BitMatrix.from_dense(dense)
    zero = np.zeros(cols, dtype=np.uint8)
    for m in range(1, 1 << cols):
        res = bp_peel(h, _erase(zero, _mask_bits(m, cols)))
        assert (res.status is not DecodeStatus.RECOVERED) == table[m], m


@pytest.mark.slow
def test_peeling_fails_exactly_on_stopping_sets_n20():
    rng = np.random.default_rng(20)
    dense = random_matrix(rng, 10, 20, 0.25)
    table = contains_stopping_set_table(dense)
    h = BitMatrix.from_dense(dense)
    zero = np.zeros(20, dtype=np.uint8)
    for m in range(1, 1 << 20, 7):
        res = bp_peel(h, _erase(zero, _mask_bits(m, 20)))
        assert (res.status is not DecodeStatus.RECOVERED) == table[m]


def test_peeling_stalls_on_codeword_support_of_lifted_code():
    # the support of a codeword is a stopping set, so nothing can be peeled
    code = QcCode(load_fixture("dh-8x16"), 17)
    basis = nullspace(code.h).to_dense()
    support = basis[np.argmin(basis.sum(axis=1))].astype(bool)
    res = bp_peel(code.h, _erase(np.zeros(code.n, np.uint8), support))
    assert res.status is DecodeStatus.FAILED
    np.testing.assert_array_equal(res.word.erased, support)


def test_bounded_distance_always_recovered():
    rng = np.random.default_rng(7)
    dense = random_matrix(rng, 7, 14, 0.4)
    spec = oracle_spectrum(dense)
    d_min = int(np.flatnonzero(spec[1:])[0]) + 1
    h = BitMatrix.from_dense(dense)
    cw = _random_codeword(h, rng)
    for idx in itertools.combinations(range(14), d_min - 1):
        mask = np.zeros(14, dtype=bool)
        mask[list(idx)] = True
        assert ml_decode(h, _erase(cw, mask)).status is DecodeStatus.RECOVERED
    # at d_min some pattern (a codeword support) must fail
    support = oracle_codewords(dense)
    support = support[support.sum(axis=1) == d_min][0].astype(bool)
    assert ml_decode(h, _erase(cw, support)).status is not DecodeStatus.RECOVERED


def test_all_erased_never_recovered():
    code = QcCode(load_fixture("dh-8x16"), 17)
    word = ErasureWord.all_erased(code.n)
    for res in (bp_peel(code.h, word), ml_decode(code.h, word),
                swml_decode(code, word, SwmlConfig(16))):
        assert res.status is not DecodeStatus.RECOVERED


def test_inconsistent_input_raises():
    h = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    # bits 0 and 2 disagree with any codeword for a unique middle value
    with pytest.raises(DecodingInvariantError):
        ml_decode(h, _erase([1, 0, 0], [0, 1, 0]))


def test_length_mismatch():
    with pytest.raises(ContractViolation):
        bp_peel(BitMatrix.identity(3), _erase([0, 0], [1, 0]))


def test_erasure_word_zeroes_unknown_bits():
    w = ErasureWord(np.array([1, 1, 1]), np.array([0, 1, 0]))
    np.testing.assert_array_equal(w.bits, [1, 0, 1])
    assert w.num_erased == 1
    with pytest.raises(ContractViolation):
        ErasureWord(np.zeros(3), np.zeros(2))


TOY = QcCode(DegreeMatrix(np.array([[0, 1, 3], [3, 0, 2]])), 11)


def _resolved(word, res):
    return word.erased & ~res.word.erased


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32), st.floats(0.2, 0.75),
       st.sampled_from([(TOY, 7), (TOY, 5), (QcCode(load_fixture("dh-8x16"), 20), 16)]),
       st.integers(1, 3), st.booleans())
def test_dominance_and_no_miscorrection(seed, eps, case, shift, repeel):
    code, w = case
    rng = np.random.default_rng(seed)
    cw = _random_codeword(code.h, rng)
    word = _erase(cw, rng.random(code.n) < eps)
    bp = bp_peel(code.h, word)
    sw = swml_decode(code, word, SwmlConfig(w, shift, 15, repeel))
    ml = ml_decode(code.h, word)
    r_bp, r_sw, r_ml = (_resolved(word, r) for r in (bp, sw, ml))
    assert not (r_bp & ~r_sw).any()
    assert not (r_sw & ~r_ml).any()
    for res in (bp, sw, ml):
        known = ~res.word.erased
        np.testing.assert_array_equal(res.word.bits[known], cw[known])


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32), st.floats(0.3, 0.8))
def test_full_span_window_equals_ml(seed, eps):
    code = TOY
    rng = np.random.default_rng(seed)
    cw = _random_codeword(code.h, rng)
    word = _erase(cw, rng.random(code.n) < eps)
    sw = swml_decode(code, word, SwmlConfig(code.m0 + code.mu))
    ml = ml_decode(code.h, word)
    np.testing.assert_array_equal(sw.word.erased, ml.word.erased)
    np.testing.assert_array_equal(sw.word.bits, ml.word.bits)


def test_swml_without_erasures():
    word = ErasureWord.from_codeword(np.zeros(TOY.n, np.uint8), np.zeros(TOY.n, bool))
    res = swml_decode(TOY, word, SwmlConfig(7))
    assert res.status is DecodeStatus.RECOVERED and res.stats.windows_solved == 0


@pytest.mark.parametrize("degree, m0", [([[0, 1]], 9), ([[0, 1, 3], [3, 0, 2]], 11)])
def test_short_burst_recovered_in_one_pass_when_ml_recovers(degree, m0):
    code = QcCode(DegreeMatrix(np.array(degree)), m0)
    mu, c = code.mu, code.c
    width = max(mu, 1)
    cfg = SwmlConfig(2 * mu + 1)
    hits = 0
    rng = np.random.default_rng(3)
    for start in range(m0):
        for _ in range(20):
            mask = np.zeros(code.n, dtype=bool)
            blocks = [(start + b) % m0 for b in range(width)]
            for b in blocks:
                mask[b * c:(b + 1) * c] = rng.random(c) < 0.8
            word = _erase(np.zeros(code.n, np.uint8), mask)
            if ml_decode(code.h, word).status is not DecodeStatus.RECOVERED:
                continue
            res = swml_decode(code, word, cfg)
            assert res.status is DecodeStatus.RECOVERED
            assert res.stats.passes <= 1
            hits += 1
    assert hits > 0


def test_more_passes_never_hurt():
    code = QcCode(load_fixture("dh-8x16"), 20)
    rng = np.random.default_rng(5)
    for _ in range(20):
        word = _erase(np.zeros(code.n, np.uint8), rng.random(code.n) < 0.45)
        one = swml_decode(code, word, SwmlConfig(16, max_passes=1))
        many = swml_decode(code, word, SwmlConfig(16, max_passes=15))
        assert (many.word.erased <= one.word.erased).all()


def test_swml_config_errors():
    with pytest.raises(ContractViolation):
        SwmlConfig(7, shift_blocks=0)
    with pytest.raises(ContractViolation):
        SwmlConfig(7, max_passes=0)
    word = ErasureWord.all_erased(TOY.n)
    with pytest.raises(ContractViolation):
        swml_decode(TOY, word, SwmlConfig(3))
    with pytest.raises(ContractViolation):
        swml_decode(TOY, word, SwmlConfig(7, shift_blocks=12))
