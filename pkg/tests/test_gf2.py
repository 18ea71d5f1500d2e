import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from becldpc.errors import ContractViolation
from becldpc.gf2 import (
    BitMatrix,
    SolveStatus,
    nullspace,
    pack_rows,
    pivot_columns,
    rank,
    solve_erasures,
    submatrix_columns,
    unpack_rows,
)

from conftest import oracle_codewords, oracle_rank, random_matrix


def bit_arrays(max_rows=64, max_cols=130):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(0, max_cols))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


@given(bit_arrays())
def test_pack_roundtrip_and_zero_padding(dense):
    m = BitMatrix.from_dense(dense)
    assert m.shape == dense.shape
    np.testing.assert_array_equal(m.to_dense(), dense)
    if dense.shape[1] % 64 and dense.shape[0]:
        pad = m.data[:, -1] >> np.uint64(dense.shape[1] % 64)
        assert not pad.any()


def test_padding_masked_on_raw_words():
    data = np.full((2, 1), np.uint64(0xFFFFFFFFFFFFFFFF))
    m = BitMatrix(2, 5, data)
    assert int(m.data[0, 0]) == 0b11111
    assert m.to_dense().sum() == 10


def test_data_is_read_only():
    m = BitMatrix.identity(3)
    with pytest.raises(ValueError):
        m.data[0, 0] = 0


@pytest.mark.parametrize("dense, expected", [
    (np.eye(3, dtype=np.uint8), 3),
    (np.zeros((2, 4), dtype=np.uint8), 0),
    (np.zeros((0, 5), dtype=np.uint8), 0),
    (np.zeros((4, 0), dtype=np.uint8), 0),
    (np.ones((3, 3), dtype=np.uint8), 1),
])
def test_rank_small(dense, expected):
    assert rank(BitMatrix.from_dense(dense)) == expected


def test_rank_random_6x10_matches_oracle(rng):
    for _ in range(20):
        d = random_matrix(rng, 6, 10, 0.5)
        assert rank(BitMatrix.from_dense(d)) == oracle_rank(d)


def test_rank_1000_random_matrices_match_oracle(rng):
    for _ in range(1000):
        rows, cols = rng.integers(1, 65, size=2)
        d = random_matrix(rng, rows, cols, rng.uniform(0.05, 0.6))
        r = rank(BitMatrix.from_dense(d))
        assert r == oracle_rank(d)
        assert r <= min(rows, cols)


@given(bit_arrays(40, 150))
def test_rank_property(dense):
    m = BitMatrix.from_dense(dense)
    before = m.data.copy()
    r = rank(m)
    assert r == oracle_rank(dense)
    assert r <= min(dense.shape)
    np.testing.assert_array_equal(m.data, before)


def test_rank_across_word_boundary():
    d = np.zeros((3, 200), dtype=np.uint8)
    d[0, 63] = d[1, 64] = d[2, 199] = 1
    d[2, 63] = 1
    assert rank(BitMatrix.from_dense(d)) == 3


@given(bit_arrays(20, 90))
def test_nullspace_is_kernel_of_full_dimension(dense):
    m = BitMatrix.from_dense(dense)
    basis = nullspace(m)
    assert basis.rows == dense.shape[1] - oracle_rank(dense)
    assert basis.cols == dense.shape[1]
    b = basis.to_dense().astype(np.int64)
    assert not ((dense.astype(np.int64) @ b.T) % 2).any()
    assert oracle_rank(b) == basis.rows


def test_nullspace_of_empty_matrix_is_everything():
    assert nullspace(BitMatrix.zeros(0, 4)) == BitMatrix.identity(4)


def test_pivot_columns_are_leftmost_independent_set():
    d = np.array([[1, 1, 0, 1], [1, 1, 1, 0]], dtype=np.uint8)
    np.testing.assert_array_equal(pivot_columns(BitMatrix.from_dense(d)), [0, 2])


def test_submatrix_examples():
    m = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    sub = submatrix_columns(m, [0, 2])
    # hand-unrolled extraction: row 101 -> bits 0,2 = 1,1; row 011 -> 0,1
    np.testing.assert_array_equal(sub.to_dense(), [[1, 1], [0, 1]])
    assert submatrix_columns(m, range(3)) == m
    empty = submatrix_columns(m, [])
    assert empty.shape == (2, 0) and rank(empty) == 0


def test_submatrix_keeps_given_order():
    m = BitMatrix.from_dense([[1, 0, 0], [0, 0, 1]])
    np.testing.assert_array_equal(submatrix_columns(m, [2, 0]).to_dense(), [[0, 1], [1, 0]])


@pytest.mark.parametrize("idx", [[3], [-1], [0, 0]])
def test_submatrix_rejects_bad_indices(idx):
    with pytest.raises(ContractViolation):
        submatrix_columns(BitMatrix.identity(3), idx)


def test_solve_single_check_both_erased():
    out = solve_erasures(BitMatrix.from_dense([[1, 1]]), [0])
    assert out.status is SolveStatus.UNDERDETERMINED
    assert not out.forced.any()
    assert out.solution is None


def test_solve_unique_middle_bit():
    h = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    out = solve_erasures(submatrix_columns(h, [1]), [0, 0])
    assert out.status is SolveStatus.UNIQUE
    np.testing.assert_array_equal(out.solution, [0])
    assert out.forced.all()


def test_solve_inconsistent():
    out = solve_erasures(BitMatrix.from_dense([[1], [1]]), [0, 1])
    assert out.status is SolveStatus.INCONSISTENT


def test_solve_length_mismatch():
    with pytest.raises(ContractViolation):
        solve_erasures(BitMatrix.identity(2), [0, 0, 0])


def test_solve_empty_system():
    out = solve_erasures(BitMatrix.zeros(3, 0), [0, 0, 0])
    assert out.status is SolveStatus.UNIQUE and out.solution.size == 0
    assert solve_erasures(BitMatrix.zeros(3, 0), [0, 1, 0]).status is SolveStatus.INCONSISTENT


def _brute_force_check(h_dense, codeword, erased):
    """Compare solve_erasures with enumeration of all consistent codewords."""
    codewords = oracle_codewords(h_dense)
    known = ~erased
    consistent = codewords[(codewords[:, known] == codeword[known]).all(axis=1)]
    idx = np.flatnonzero(erased)
    h = BitMatrix.from_dense(h_dense)
    syn = (h_dense[:, known].astype(int) @ codeword[known].astype(int)) % 2
    out = solve_erasures(submatrix_columns(h, idx), syn)
    assert out.status is not SolveStatus.INCONSISTENT
    values = consistent[:, idx]
    same = (values == values[0]).all(axis=0)
    np.testing.assert_array_equal(out.forced.astype(bool), same)
    np.testing.assert_array_equal(out.forced_values[same], values[0, same])
    assert (out.status is SolveStatus.UNIQUE) == (len(consistent) == 1)
    assert (out.status is SolveStatus.UNIQUE) == (out.rank == idx.size)


def test_solve_matches_brute_force_on_10_5_codes(rng):
    for _ in range(40):
        h_dense = random_matrix(rng, 5, 10, 0.5)
        codewords = oracle_codewords(h_dense)
        cw = codewords[rng.integers(len(codewords))]
        erased = np.zeros(10, dtype=bool)
        erased[rng.choice(10, 4, replace=False)] = True
        _brute_force_check(h_dense, cw, erased)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 8), st.integers(2, 11))
def test_solve_forced_property(seed, rows, cols):
    rng = np.random.default_rng(seed)
    h_dense = random_matrix(rng, rows, cols, rng.uniform(0.2, 0.7))
    codewords = oracle_codewords(h_dense)
    cw = codewords[rng.integers(len(codewords))]
    erased = rng.random(cols) < 0.5
    _brute_force_check(h_dense, cw, erased)


def test_solve_never_inconsistent_on_exhaustive_patterns():
    h_dense = np.array([[1, 1, 0, 1, 0], [0, 1, 1, 0, 1], [1, 0, 1, 1, 1]], dtype=np.uint8)
    h = BitMatrix.from_dense(h_dense)
    for cw in oracle_codewords(h_dense):
        for pattern in itertools.product((False, True), repeat=5):
            erased = np.array(pattern)
            known = ~erased
            syn = (h_dense[:, known].astype(int) @ cw[known].astype(int)) % 2
            out = solve_erasures(submatrix_columns(h, np.flatnonzero(erased)), syn)
            assert out.status is not SolveStatus.INCONSISTENT


def test_pack_unpack_helpers():
    d = np.array([[1, 0, 1], [0, 1, 0]], dtype=np.uint8)
    np.testing.assert_array_equal(unpack_rows(pack_rows(d), 3), d)
    assert pack_rows(d)[0, 0] == 0b101


def test_equality_and_hash():
    a = BitMatrix.from_dense([[1, 0], [0, 1]])
    assert a == BitMatrix.identity(2)
    assert hash(a) == hash(BitMatrix.identity(2))
    assert a != BitMatrix.zeros(2, 2)
    assert a[1, 1] == 1 and a[0, 1] == 0
