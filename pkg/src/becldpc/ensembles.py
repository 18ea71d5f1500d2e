"""Random (J,K)-regular parity-check matrices: Gallager and Richardson-Urbanke ensembles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .gf2 import BitMatrix


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of a (J,K)-regular ensemble of length ``n``."""

    j: int
    k: int
    n: int

    def __post_init__(self):
        if self.j < 2 or self.k < self.j:
            raise ContractViolation(f"need J >= 2 and K >= J, got J={self.j}, K={self.k}")
        if self.n <= 0 or self.n % self.k:
            raise ContractViolation(f"n={self.n} must be a positive multiple of K={self.k}")

    @property
    def r(self) -> int:
        return self.n * self.j // self.k

    @property
    def m_strip(self) -> int:
        return self.n // self.k

    @property
    def design_rate(self) -> float:
        return 1 - self.j / self.k


def base_strip(spec: EnsembleSpec) -> np.ndarray:
    """Strip whose row ``i`` covers columns ``iK .. iK+K-1``."""
    strip = np.zeros((spec.m_strip, spec.n), dtype=np.uint8)
    for i in range(spec.m_strip):
        strip[i, i * spec.k:(i + 1) * spec.k] = 1
    return strip


def gallager_dense(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    strip = base_strip(spec)
    strips = [strip] + [strip[:, rng.permutation(spec.n)] for _ in range(spec.j - 1)]
    return np.vstack(strips)


def sample_gallager(spec: EnsembleSpec, rng: np.random.Generator) -> BitMatrix:
    """Draw an ``r x n`` Gallager matrix: a fixed first strip plus J-1 column-permuted copies."""
    return BitMatrix.from_dense(gallager_dense(spec, rng))


def ru_sockets(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """Permuted socket sequence ``b`` reshaped to ``(r, K)`` column indices."""
    a = np.repeat(np.arange(spec.n), spec.j)
    return rng.permutation(a).reshape(spec.r, spec.k)


def ru_dense(sockets: np.ndarray, n: int) -> np.ndarray:
    r = sockets.shape[0]
    counts = np.zeros((r, n), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(r), sockets.shape[1]), sockets.ravel()), 1)
    return (counts & 1).astype(np.uint8)


def is_strictly_regular(sockets: np.ndarray) -> bool:
    s = np.sort(sockets, axis=1)
    return not bool((s[:, 1:] == s[:, :-1]).any())


def sample_ru(spec: EnsembleSpec, rng: np.random.Generator) -> tuple[BitMatrix, bool]:
    """Draw an RU matrix and report whether every row got K distinct columns.

    A column hit several times by one row contributes the parity of its hit count.
    """
    sockets = ru_sockets(spec, rng)
    return BitMatrix.from_dense(ru_dense(sockets, spec.n)), is_strictly_regular(sockets)


def regular_fraction(spec: EnsembleSpec, rng: np.random.Generator, draws: int) -> float:
    """Fraction of RU draws that are strictly (J,K)-regular."""
    a = np.repeat(np.arange(spec.n), spec.j)
    perms = rng.permuted(np.broadcast_to(a, (draws, a.size)), axis=1)
    rows = np.sort(perms.reshape(draws, spec.r, spec.k), axis=2)
    collide = (rows[:, :, 1:] == rows[:, :, :-1]).any(axis=(1, 2))
    return float(1.0 - collide.mean())
