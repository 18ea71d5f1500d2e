"""Quasi-cyclic LDPC codes from monomial degree matrices.

A degree matrix with ``c - b`` rows and ``c`` columns holds, per cell, either
``-1`` (zero polynomial) or the exponent ``e`` of ``D^e``. Writing
``H(D) = H_0 + H_1 D + ... + H_mu D^mu``, the tail-biting block code of
``M0`` blocks puts ``H_d`` at block column ``(t + d) mod M0`` of block row
``t``; the zero-tail window of ``W`` blocks does the same without wrap.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ContractViolation, DegreeMatrixParseError
from .formats import format_degree_text, parse_degree_text
from .gf2 import BitMatrix


@dataclass(frozen=True, eq=False)
class DegreeMatrix:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 2 or 0 in e.shape:
            raise DegreeMatrixParseError(f"degree matrix must be a nonempty 2-D array, got {e.shape}")
        bad = np.argwhere(e < -1)
        if bad.size:
            i, j = bad[0]
            raise DegreeMatrixParseError(f"cell ({i + 1},{j + 1}): entry {e[i, j]} < -1")
        for i in np.flatnonzero((e < 0).all(axis=1)):
            raise DegreeMatrixParseError(f"row {i + 1} has no nonnegative entry")
        for j in np.flatnonzero((e < 0).all(axis=0)):
            raise DegreeMatrixParseError(f"column {j + 1} has no nonnegative entry")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def mu(self) -> int:
        """Syndrome memory: the largest exponent."""
        return int(self.entries.max())

    def row_weights(self) -> np.ndarray:
        return (self.entries >= 0).sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return (self.entries >= 0).sum(axis=0)

    def component(self, d: int) -> np.ndarray:
        """Binary coefficient matrix ``H_d``."""
        return (self.entries == d).astype(np.uint8)

    def to_text(self) -> str:
        return format_degree_text(self.entries)

    def __eq__(self, other):
        return isinstance(other, DegreeMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())


def parse_degree_matrix(text: str) -> DegreeMatrix:
    return DegreeMatrix(parse_degree_text(text))


def read_degree_matrix(path) -> DegreeMatrix:
    return parse_degree_matrix(Path(path).read_text())


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("becldpc") / "fixtures" / name))


def load_fixture(name: str) -> DegreeMatrix:
    if not name.endswith(".dm"):
        name += ".dm"
    return read_degree_matrix(fixture_path(name))


def bidiagonal_block(rows: int) -> np.ndarray:
    """``rows x (rows-1)`` degree block with zeros at ``(i, i)`` and ``(i+1, i)``."""
    block = np.full((rows, rows - 1), -1, dtype=np.int64)
    for i in range(rows - 1):
        block[i, i] = 0
        block[i + 1, i] = 0
    return block


def assemble_irregular_base(ha: DegreeMatrix) -> DegreeMatrix:
    """Prefix ``ha`` with the bidiagonal accumulator block."""
    return DegreeMatrix(np.hstack([bidiagonal_block(ha.shape[0]), ha.entries]))


@dataclass(frozen=True, eq=False)
class WindowMatrix:
    w_blocks: int
    mu: int
    block_rows: int
    block_cols: int
    matrix: BitMatrix


@dataclass(frozen=True, eq=False)
class QcCode:
    """Tail-biting QC-LDPC block code of ``m0`` blocks."""

    degree: DegreeMatrix
    m0: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.m0 <= self.degree.mu:
            raise ContractViolation(f"lifting factor M0={self.m0} must exceed mu={self.degree.mu}")

    @property
    def mu(self) -> int:
        return self.degree.mu

    @property
    def c(self) -> int:
        return self.degree.shape[1]

    @property
    def b(self) -> int:
        return self.c - self.degree.shape[0]

    @property
    def n(self) -> int:
        return self.m0 * self.c

    @property
    def r_nominal(self) -> int:
        return self.m0 * (self.c - self.b)

    @property
    def h(self) -> BitMatrix:
        if "h" not in self._cache:
            self._cache["h"] = expand_tailbiting(self)
        return self._cache["h"]

    @property
    def graph(self):
        if "graph" not in self._cache:
            from .decode import TannerGraph

            self._cache["graph"] = TannerGraph.from_matrix(self.h)
        return self._cache["graph"]


def _block_positions(degree: DegreeMatrix):
    rows, cols = np.nonzero(degree.entries >= 0)
    return rows, cols, degree.entries[rows, cols]


def tailbiting_dense(code: QcCode) -> np.ndarray:
    rb, cb = code.c - code.b, code.c
    i, j, d = _block_positions(code.degree)
    dense = np.zeros((code.m0 * rb, code.m0 * cb), dtype=np.uint8)
    for t in range(code.m0):
        dense[t * rb + i, ((t + d) % code.m0) * cb + j] = 1
    return dense


def expand_tailbiting(code: QcCode) -> BitMatrix:
    return BitMatrix.from_dense(tailbiting_dense(code))


def expand_window(code: QcCode, w_blocks: int) -> WindowMatrix:
    """Zero-tail window parity-check matrix of ``w_blocks`` blocks."""
    mu = code.mu
    if w_blocks <= mu:
        raise ContractViolation(f"window of {w_blocks} blocks must exceed mu={mu}")
    if w_blocks < 2 * mu + 1:
        warnings.warn(f"window of {w_blocks} blocks is below 2*mu+1={2 * mu + 1}", stacklevel=2)
    rb, cb = code.c - code.b, code.c
    i, j, d = _block_positions(code.degree)
    dense = np.zeros(((w_blocks - mu) * rb, w_blocks * cb), dtype=np.uint8)
    for t in range(w_blocks - mu):
        dense[t * rb + i, (t + d) * cb + j] = 1
    return WindowMatrix(w_blocks, mu, rb, cb, BitMatrix.from_dense(dense))


@functools.lru_cache(maxsize=None)
def irregular_base(name: str = "irregular-12x13") -> DegreeMatrix:
    """Full ``12 x 24`` base of a published irregular code."""
    return assemble_irregular_base(load_fixture(name))
