"""Dense GF(2) linear algebra on word-packed rows.

Rows are stored as ``uint64`` words, least-significant bit first: column ``j``
lives in word ``j >> 6`` at bit ``j & 63``. Padding bits past ``cols`` are kept
at zero by every constructor, so word-level comparisons are exact.

Elimination never permutes columns; the pivot column of each echelon row is
tracked instead, which keeps column extraction cheap for the window decoder.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ContractViolation

WORD = 64


def n_words(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``(rows, n_words(cols))`` uint64 words."""
    dense = np.asarray(dense)
    if dense.ndim != 2:
        raise ContractViolation(f"expected a 2-D array, got shape {dense.shape}")
    rows, cols = dense.shape
    words = n_words(cols)
    padded = np.zeros((rows, words * WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64, copy=False).reshape(rows, words)


def unpack_rows(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(data.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


class BitMatrix:
    """Immutable dense binary matrix with word-packed rows."""

    __slots__ = ("rows", "cols", "data", "_graph")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ContractViolation(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = np.zeros((rows, n_words(cols)), dtype=np.uint64)
        elif data.shape != (rows, n_words(cols)):
            raise ContractViolation(f"packed data shape {data.shape} does not fit {rows}x{cols}")
        data = np.array(data, dtype=np.uint64)
        rem = cols % WORD
        if rem and rows:
            data[:, -1] &= np.uint64((1 << rem) - 1)
        data.setflags(write=False)
        self.data = data
        self._graph = None

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim == 1:
            dense = dense.reshape(1, -1) if dense.size else dense.reshape(0, 0)
        return cls(dense.shape[0], dense.shape[1], pack_rows(dense))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.data, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return int((int(self.data[i, j >> 6]) >> (j & 63)) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0)

    def rank(self) -> int:
        return rank(self)

    def nullspace(self) -> BitMatrix:
        return nullspace(self)

    def multiply_vector(self, x) -> np.ndarray:
        """Return ``H x^T`` over GF(2) for a 0/1 vector ``x`` of length ``cols``."""
        x = np.asarray(x, dtype=np.uint8)
        if x.shape != (self.cols,):
            raise ContractViolation(f"vector length {x.shape} != cols {self.cols}")
        return (self.to_dense().astype(np.int64) @ x.astype(np.int64) % 2).astype(np.uint8)


# ---------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True)
def _rref(data, rhs, ncols, full):
    """Row-reduce ``data`` in place (and ``rhs`` alongside).

    With ``full`` the result is reduced row-echelon form; otherwise only
    entries below each pivot are cleared. Returns the pivot columns; echelon
    row ``i`` holds the pivot for ``pivots[i]``. The second return value
    counts row XORs.
    """
    rows, words = data.shape
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    r = 0
    xors = 0
    for c in range(ncols):
        if r == rows:
            break
        w = c >> 6
        b = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, rows):
            if data[i, w] & b:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(words):
                t = data[p, k]
                data[p, k] = data[r, k]
                data[r, k] = t
            t8 = rhs[p]
            rhs[p] = rhs[r]
            rhs[r] = t8
        start = 0 if full else r + 1
        for i in range(start, rows):
            if i != r and data[i, w] & b:
                for k in range(words):
                    data[i, k] ^= data[r, k]
                rhs[i] ^= rhs[r]
                xors += 1
        pivots[r] = c
        r += 1
    return pivots[:r], xors


@numba.njit(cache=True)
def _forced_from_rref(data, rhs, pivots, ncols):
    """Classify unknowns of an RREF system.

    Returns ``(consistent, forced, values)``: an unknown is forced iff its
    column is a pivot and its echelon row has no 1 in any free column.
    """
    rows, words = data.shape
    rank = pivots.shape[0]
    consistent = True
    for i in range(rank, rows):
        if rhs[i]:
            consistent = False
            break
    free = np.zeros(words, dtype=np.uint64)
    for c in range(ncols):
        free[c >> 6] |= np.uint64(1) << np.uint64(c & 63)
    for i in range(rank):
        c = pivots[i]
        free[c >> 6] &= ~(np.uint64(1) << np.uint64(c & 63))
    forced = np.zeros(ncols, dtype=np.uint8)
    values = np.zeros(ncols, dtype=np.uint8)
    for i in range(rank):
        hit = False
        for k in range(words):
            if data[i, k] & free[k]:
                hit = True
                break
        if not hit:
            forced[pivots[i]] = 1
            values[pivots[i]] = rhs[i]
    return consistent, forced, values


@numba.njit(cache=True)
def _nullspace_basis(data, pivots, ncols):
    """Nullspace basis (dense 0/1 rows) from an RREF matrix."""
    rank = pivots.shape[0]
    is_pivot = np.zeros(ncols, dtype=np.uint8)
    for i in range(rank):
        is_pivot[pivots[i]] = 1
    k = ncols - rank
    basis = np.zeros((k, ncols), dtype=np.uint8)
    row = 0
    for f in range(ncols):
        if is_pivot[f]:
            continue
        basis[row, f] = 1
        w = f >> 6
        b = np.uint64(1) << np.uint64(f & 63)
        for i in range(rank):
            if data[i, w] & b:
                basis[row, pivots[i]] = 1
        row += 1
    return basis


# ---------------------------------------------------------------------------
# public operations


def rank(m: BitMatrix) -> int:
    """Rank of ``m`` over GF(2); ``m`` is not modified."""
    if m.rows == 0 or m.cols == 0:
        return 0
    work = m.data.copy()
    pivots, _ = _rref(work, np.zeros(m.rows, dtype=np.uint8), m.cols, False)
    return int(pivots.shape[0])


def pivot_columns(m: BitMatrix) -> np.ndarray:
    """Pivot columns of the row-echelon form, scanning columns left to right."""
    if m.rows == 0 or m.cols == 0:
        return np.zeros(0, dtype=np.int64)
    work = m.data.copy()
    pivots, _ = _rref(work, np.zeros(m.rows, dtype=np.uint8), m.cols, False)
    return pivots.copy()


def nullspace(m: BitMatrix) -> BitMatrix:
    """Basis of ``{x : m x^T = 0}`` as the rows of a ``k x cols`` matrix."""
    if m.cols == 0:
        return BitMatrix.zeros(0, 0)
    if m.rows == 0:
        return BitMatrix.identity(m.cols)
    work = m.data.copy()
    pivots, _ = _rref(work, np.zeros(m.rows, dtype=np.uint8), m.cols, True)
    basis = _nullspace_basis(work, pivots, m.cols)
    return BitMatrix(basis.shape[0], m.cols, pack_rows(basis))


def submatrix_columns(m: BitMatrix, idx) -> BitMatrix:
    """Columns ``idx`` of ``m``, in the given order."""
    idx = np.asarray(list(idx), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= m.cols):
        raise ContractViolation(f"column index out of range for {m.cols} columns")
    if np.unique(idx).size != idx.size:
        raise ContractViolation("duplicate column index")
    dense = m.to_dense()[:, idx]
    return BitMatrix(m.rows, idx.size, pack_rows(dense.reshape(m.rows, idx.size)))


class SolveStatus(enum.Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class SolveOutcome:
    """Result of solving ``x · h_colsᵀ = s`` for the erased unknowns.

    ``forced`` flags unknowns whose value is the same in every solution and
    ``forced_values`` holds those values (zero elsewhere). ``solution`` is
    set only when the system has a unique solution.
    """

    status: SolveStatus
    forced: np.ndarray
    forced_values: np.ndarray
    rank: int
    solution: np.ndarray | None = None


def solve_erasures(h_cols: BitMatrix, syndrome) -> SolveOutcome:
    syndrome = np.asarray(syndrome, dtype=np.uint8).reshape(-1)
    if syndrome.shape[0] != h_cols.rows:
        raise ContractViolation(
            f"syndrome length {syndrome.shape[0]} != row count {h_cols.rows}"
        )
    nu = h_cols.cols
    if h_cols.rows == 0 or nu == 0:
        forced = np.full(nu, nu == 0, dtype=np.uint8)
        status = SolveStatus.UNIQUE if nu == 0 else SolveStatus.UNDERDETERMINED
        if h_cols.rows and syndrome.any():
            status = SolveStatus.INCONSISTENT
        zeros = np.zeros(nu, dtype=np.uint8)
        return SolveOutcome(status, forced, zeros, 0, zeros if status is SolveStatus.UNIQUE else None)
    work = h_cols.data.copy()
    rhs = (syndrome & 1).copy()
    pivots, _ = _rref(work, rhs, nu, True)
    consistent, forced, values = _forced_from_rref(work, rhs, pivots, nu)
    r = int(pivots.shape[0])
    if not consistent:
        status = SolveStatus.INCONSISTENT
    elif r == nu:
        status = SolveStatus.UNIQUE
    else:
        status = SolveStatus.UNDERDETERMINED
    solution = values.copy() if status is SolveStatus.UNIQUE else None
    return SolveOutcome(status, forced, values, r, solution)
