"""Exact weight enumerators: ensemble averages and enumerated spectra of specific codes.

Ensemble averages are exact rationals. Strip enumerators come from repeated
polynomial multiplication, so an ``n``-bit strip costs O(M * max_deg * K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numba
import numpy as np

from .ensembles import EnsembleSpec
from .errors import EnumerationBudgetError
from .gf2 import BitMatrix, nullspace

PolyCoeffs = list[int]

DEFAULT_MAX_DIM = 28


@dataclass(frozen=True)
class Spectrum:
    """Weight enumerator ``coeffs[w]`` (possibly an ensemble average) for length ``n``."""

    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"need {self.n + 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_counts(cls, counts) -> Spectrum:
        coeffs = tuple(Fraction(int(c)) for c in counts)
        return cls(len(coeffs) - 1, coeffs)

    def __getitem__(self, w: int) -> Fraction:
        return self.coeffs[w]

    def total(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def min_distance(self) -> int | None:
        """Smallest nonzero weight with a nonzero coefficient."""
        for w in range(1, self.n + 1):
            if self.coeffs[w]:
                return w
        return None

    def log10(self) -> list[float]:
        return [log10_fraction(c) for c in self.coeffs]

    def as_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])


def log10_fraction(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    return math.log10(x.numerator) - math.log10(x.denominator)


def poly_power(f: PolyCoeffs, big_l: int, max_deg: int) -> PolyCoeffs:
    """Coefficients of ``f(s)**big_l`` up to degree ``max_deg`` (exact integers)."""
    if big_l < 1:
        raise ValueError("big_l must be >= 1")
    f = [int(c) for c in f[:max_deg + 1]]
    f += [0] * (max_deg + 1 - len(f))
    support = [(i, c) for i, c in enumerate(f) if c]
    current = list(f)
    for _ in range(big_l - 1):
        nxt = [0] * (max_deg + 1)
        for i, fi in support:
            for l in range(i, max_deg + 1):
                prev = current[l - i]
                if prev:
                    nxt[l] += fi * prev
        current = nxt
    return current


def strip_enumerator(k_row: int, m_strip: int) -> PolyCoeffs:
    """Number of weight-w words satisfying a strip of ``m_strip`` disjoint weight-``k_row`` checks."""
    g = [comb(k_row, i) if i % 2 == 0 else 0 for i in range(k_row + 1)]
    return poly_power(g, m_strip, k_row * m_strip)


def avg_spectrum_linear(n: int, r: int) -> Spectrum:
    scale = Fraction(1, 2 ** r)
    return Spectrum(n, (Fraction(1),) + tuple(comb(n, w) * scale for w in range(1, n + 1)))


def avg_spectrum_even(n: int, r: int) -> Spectrum:
    scale = Fraction(2, 2 ** r)
    coeffs = [Fraction(1)]
    coeffs += [comb(n, w) * scale if w % 2 == 0 else Fraction(0) for w in range(1, n + 1)]
    return Spectrum(n, tuple(coeffs))


def avg_spectrum_gallager(spec: EnsembleSpec) -> Spectrum:
    """Gallager-ensemble average ``C(n,w)^(1-J) * N_w^J``."""
    n, j = spec.n, spec.j
    strip = strip_enumerator(spec.k, spec.m_strip)
    coeffs = tuple(Fraction(strip[w] ** j, comb(n, w) ** (j - 1)) for w in range(n + 1))
    return Spectrum(n, coeffs)


# ---------------------------------------------------------------------------
# enumeration of specific codes


@numba.njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def _gray_walk(basis, n):
    """Weight counts of all 2^k combinations of the packed ``basis`` rows."""
    k, words = basis.shape
    counts = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(words, dtype=np.uint64)
    counts[0] = 1
    total = np.int64(1) << np.int64(k)
    for i in range(1, total):
        bit = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            bit += 1
        w = 0
        for q in range(words):
            cur[q] ^= basis[bit, q]
            w += _popcount64(cur[q])
        counts[w] += 1
    return counts


def empirical_spectrum(h: BitMatrix, max_dim: int = DEFAULT_MAX_DIM) -> Spectrum:
    """Exact spectrum of the null space of ``h`` by Gray-code enumeration."""
    basis = nullspace(h)
    k = basis.rows
    if k > max_dim:
        raise EnumerationBudgetError(k, max_dim)
    if k == 0:
        counts = np.zeros(h.cols + 1, dtype=np.int64)
        counts[0] = 1
    else:
        counts = _gray_walk(basis.data, h.cols)
    return Spectrum.from_counts(counts)


def average_spectra(spectra) -> Spectrum:
    spectra = list(spectra)
    n = spectra[0].n
    m = len(spectra)
    coeffs = tuple(sum((s.coeffs[w] for s in spectra), Fraction(0)) / m for w in range(n + 1))
    return Spectrum(n, coeffs)
