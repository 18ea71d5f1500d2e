"""Shared fixtures and slow-but-obvious oracles written independently of the library."""

from __future__ import annotations

import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def oracle_rank(dense) -> int:
    """Textbook row reduction on Python ints, one row per int."""
    rows = [int("".join(str(int(b)) for b in row[::-1]) or "0", 2) for row in np.asarray(dense)]
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def oracle_codewords(dense) -> np.ndarray:
    """All words ``x`` with ``H x^T = 0`` by brute force over ``2^n`` vectors."""
    h = np.asarray(dense, dtype=np.int64)
    n = h.shape[1]
    words = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    ok = ((words @ h.T) % 2 == 0).all(axis=1) if h.shape[0] else np.ones(len(words), bool)
    return words[ok].astype(np.uint8)


def oracle_spectrum(dense) -> np.ndarray:
    cw = oracle_codewords(dense)
    n = np.asarray(dense).shape[1]
    return np.bincount(cw.sum(axis=1), minlength=n + 1)


def column_masks(dense) -> list[int]:
    h = np.asarray(dense)
    return [int(sum(int(h[i, j]) << i for i in range(h.shape[0]))) for j in range(h.shape[1])]


def row_masks(dense) -> list[int]:
    h = np.asarray(dense)
    return [int(sum(int(h[i, j]) << j for j in range(h.shape[1]))) for i in range(h.shape[0])]


def contains_stopping_set_table(dense) -> np.ndarray:
    """``table[m]`` is True iff erasure set ``m`` holds a nonempty stopping set.

    A set is stopping iff no check meets it exactly once; containment is then
    closed upward over subsets by a sum-over-subsets sweep.
    """
    n = np.asarray(dense).shape[1]
    rows = row_masks(dense)
    table = np.zeros(1 << n, dtype=bool)
    for m in range(1, 1 << n):
        table[m] = all(bin(r & m).count("1") != 1 for r in rows)
    for j in range(n):
        bit = 1 << j
        for m in range(1 << n):
            if m & bit and table[m ^ bit]:
                table[m] = True
    return table


def random_matrix(rng, rows, cols, density=0.4) -> np.ndarray:
    return (rng.random((rows, cols)) < density).astype(np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
