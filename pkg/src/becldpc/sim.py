"""BEC channel model and Monte-Carlo FER/BER estimation.

The all-zero codeword is always transmitted. On the BEC every decoder here
resolves a bit iff the erasure set (not the codeword) allows it, and the
value it writes is the transmitted one, so frame and bit error counts are the
same for every codeword. Each resolved bit is still checked against zero.

Trial ``t`` draws its erasures from the counter-based stream ``(seed, t)``,
so curves are identical for any thread count or batching, and a run can
resume at any trial index. Frame errors are counted in trial order and a
point stops at the trial that reaches the error budget.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numba
import numpy as np

from . import decode as dec
from .decode import ErasureWord, SwmlConfig, TannerGraph
from .errors import ConfigError, ContractViolation, DecodingInvariantError
from .gf2 import BitMatrix, pivot_columns, rank, submatrix_columns
from .qc import QcCode
from .rng import trial_uniforms

CSV_HEADER = ("epsilon", "trials", "frame_errors", "bit_errors", "fer", "ber", "ci_lo", "ci_hi")


@dataclass(frozen=True)
class ChannelConfig:
    eps: float = 0.0
    seed: int = 0
    max_trials: int = 10_000
    max_errors: int = 100

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ContractViolation(f"eps must lie in [0, 1], got {self.eps}")
        if not 0 <= self.seed < 2 ** 64:
            raise ContractViolation("seed must be a 64-bit unsigned integer")
        if self.max_trials < 0 or self.max_errors < 0:
            raise ContractViolation("budgets must be nonnegative")


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion ``k / n``."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half))


@dataclass
class SimPoint:
    eps: float
    trials: int
    frame_errors: int
    bit_errors: int
    info_bits: int
    wall_time: float = 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0

    @property
    def ber(self) -> float:
        total = self.trials * self.info_bits
        return self.bit_errors / total if total else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.frame_errors, self.trials)

    def merge(self, other: SimPoint) -> SimPoint:
        """Add the counts of a disjoint trial range at the same ``eps``."""
        if other.eps != self.eps or other.info_bits != self.info_bits:
            raise ContractViolation("can only merge points with equal eps and code")
        return SimPoint(self.eps, self.trials + other.trials,
                        self.frame_errors + other.frame_errors,
                        self.bit_errors + other.bit_errors, self.info_bits,
                        self.wall_time + other.wall_time)

    def row(self) -> tuple:
        lo, hi = self.interval
        return (repr(self.eps), self.trials, self.frame_errors, self.bit_errors,
                f"{self.fer:.6e}", f"{self.ber:.6e}", f"{lo:.6e}", f"{hi:.6e}")


@dataclass
class SimCurve:
    decoder: str
    points: list[SimPoint]
    params: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for p in self.points:
            w.writerow(p.row())
        return buf.getvalue()

    @property
    def eps(self) -> np.ndarray:
        return np.array([p.eps for p in self.points])

    @property
    def fer(self) -> np.ndarray:
        return np.array([p.fer for p in self.points])

    def zero_error_points(self) -> list[SimPoint]:
        return [p for p in self.points if p.frame_errors == 0 and p.trials > 0]


def erase(word, cfg: ChannelConfig, trial: int) -> ErasureWord:
    """Erase each position of ``word`` with probability ``cfg.eps``."""
    word = np.asarray(word, dtype=np.uint8).reshape(-1)
    u = trial_uniforms(cfg.seed, trial, 1, word.size)[0]
    return ErasureWord(word, u < cfg.eps)


@dataclass(frozen=True)
class _Target:
    graph: TannerGraph
    h: BitMatrix
    info_mask: np.ndarray
    qc: tuple

    @classmethod
    def build(cls, target) -> _Target:
        if isinstance(target, QcCode):
            h = target.h
            qc = (target.m0, target.c - target.b, target.c, target.mu)
        elif isinstance(target, BitMatrix):
            h = target
            qc = (1, 1, 1, 0)
        else:
            raise ConfigError(f"unsupported target type {type(target).__name__}")
        info = np.ones(h.cols, dtype=np.uint8)
        info[pivot_columns(h)] = 0
        return cls(TannerGraph.from_matrix(h), h, info, qc)


def _mode(decoder, target, swml: SwmlConfig | None):
    if isinstance(decoder, SwmlConfig):
        swml, decoder = decoder, "swml"
    name = str(decoder).lower()
    if name == "bp":
        return dec.MODE_BP, (1, 1, 1, True), name
    if name == "ml":
        return dec.MODE_ML, (1, 1, 1, True), name
    if name == "swml":
        if swml is None:
            raise ConfigError("decoder 'swml' needs a SwmlConfig")
        if not isinstance(target, QcCode):
            raise ConfigError("decoder 'swml' needs a QC code target")
        dec.check_swml(target, swml)
        return dec.MODE_SWML, (swml.w_blocks, swml.shift_blocks, swml.max_passes, swml.repeel), name
    raise ConfigError(f"unknown decoder {decoder!r}; expected bp, ml or swml")


def _chunk(tgt: _Target, mode, swml_args, seed, eps, start, count):
    g = tgt.graph
    u = trial_uniforms(seed, start, count, g.cols)
    m0, rb, cb, mu = tgt.qc
    w, s, passes, repeel = swml_args
    return dec._decode_batch(mode, g.check_ptr, g.check_vars, g.var_ptr, g.var_checks,
                             u, eps, tgt.info_mask, m0, rb, cb, mu, w, s, passes, repeel)


def _debug_check(tgt: _Target, seed, eps, start, residual):
    """Assert ML failure iff the erased columns are rank deficient."""
    u = trial_uniforms(seed, start, residual.size, tgt.h.cols)
    for i in range(residual.size):
        idx = np.flatnonzero(u[i] < eps)
        full = rank(submatrix_columns(tgt.h, idx)) == idx.size
        if full != (residual[i] == 0):
            raise DecodingInvariantError(f"trial {start + i}: ML outcome disagrees with rank test")


def run_fer(target, decoder, eps_grid, cfg: ChannelConfig, threads: int = 1,
            start_trial: int = 0, swml: SwmlConfig | None = None,
            chunk: int | None = None, debug: bool = False) -> SimCurve:
    """Estimate FER and BER over ``eps_grid``.

    Args:
        target: a ``QcCode`` or a parity-check ``BitMatrix``.
        decoder: ``"bp"``, ``"ml"``, ``"swml"`` or a ``SwmlConfig``.
        eps_grid: erasure probabilities; ``cfg.eps`` is ignored.
        cfg: seed and per-point trial and error budgets.
        threads: worker threads; results do not depend on it.
        start_trial: index of the first trial, for resuming.
        debug: cross-check every ML outcome against a direct rank test.
    """
    mode, swml_args, name = _mode(decoder, target, swml)
    tgt = _Target.build(target)
    n = tgt.graph.cols
    info_bits = int(tgt.info_mask.sum())
    if chunk is None:
        chunk = max(64, min(4096, (1 << 21) // max(n, 1)))
    threads = max(1, int(threads))
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    points = []
    try:
        for eps in eps_grid:
            eps = float(eps)
            ChannelConfig(eps, cfg.seed, cfg.max_trials, cfg.max_errors)
            t0 = time.perf_counter()
            trials = frames = bits = 0
            next_trial = start_trial
            end = start_trial + cfg.max_trials
            while next_trial < end:
                count = min(chunk * threads, end - next_trial)
                bounds_ = np.linspace(next_trial, next_trial + count, threads + 1).astype(np.int64)
                jobs = [(int(a), int(b - a)) for a, b in zip(bounds_[:-1], bounds_[1:]) if b > a]
                if pool is None:
                    parts = [_chunk(tgt, mode, swml_args, cfg.seed, eps, a, c) for a, c in jobs]
                else:
                    parts = list(pool.map(lambda j: _chunk(tgt, mode, swml_args, cfg.seed, eps, *j), jobs))
                residual = np.concatenate([p[0] for p in parts])
                info_res = np.concatenate([p[1] for p in parts])
                flags = np.concatenate([p[2] for p in parts])
                if flags.any():
                    bad = int(np.flatnonzero(flags)[0])
                    kind = "miscorrected bit" if flags[bad] & 1 else "inconsistent system"
                    raise DecodingInvariantError(f"trial {next_trial + bad} at eps={eps}: {kind}")
                fail = residual > 0
                if cfg.max_errors:
                    cum = frames + np.cumsum(fail)
                    hit = np.flatnonzero(cum >= cfg.max_errors)
                    if hit.size:
                        keep = int(hit[0]) + 1
                        residual, info_res, fail = residual[:keep], info_res[:keep], fail[:keep]
                if debug and mode == dec.MODE_ML:
                    _debug_check(tgt, cfg.seed, eps, next_trial, residual)
                trials += fail.size
                frames += int(fail.sum())
                bits += int(info_res.sum())
                next_trial += count
                if cfg.max_errors and frames >= cfg.max_errors:
                    break
            points.append(SimPoint(eps, trials, frames, bits, info_bits, time.perf_counter() - t0))
    finally:
        if pool is not None:
            pool.shutdown()
    params = {"decoder": name, "seed": cfg.seed, "max_trials": cfg.max_trials,
              "max_errors": cfg.max_errors, "start_trial": start_trial}
    if mode == dec.MODE_SWML:
        params["swml"] = asdict(swml if swml is not None else decoder)
    return SimCurve(name, points, params)


def trial_outcomes(target, decoder, eps: float, cfg: ChannelConfig, count: int,
                   start_trial: int = 0, swml: SwmlConfig | None = None,
                   threads: int = 1, chunk: int = 1024) -> np.ndarray:
    """Residual erasure count of each trial, in trial order; 0 means decoded.

    Trials use the same channel streams as :func:`run_fer`, so outcomes of
    different decoders with one seed are paired trial by trial.
    """
    mode, swml_args, _ = _mode(decoder, target, swml)
    tgt = _Target.build(target)
    ChannelConfig(eps, cfg.seed)
    jobs = [(a, min(chunk, start_trial + count - a))
            for a in range(start_trial, start_trial + count, chunk)]
    work = lambda j: _chunk(tgt, mode, swml_args, cfg.seed, float(eps), *j)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    flags = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0, np.uint8)
    if flags.any():
        bad = int(np.flatnonzero(flags)[0])
        raise DecodingInvariantError(f"trial {start_trial + bad} at eps={eps}: decoder invariant violated")
    return np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, np.int64)


def exact_ml_fer(h: BitMatrix, eps: float) -> float:
    """Exact ML frame-error probability by enumerating every erasure set.

    A set ``I`` fails iff the columns of ``h`` indexed by ``I`` are linearly
    dependent. Feasible for ``n`` up to about 20.
    """
    fail_counts = ml_failure_counts(h)
    n = h.cols
    return float(sum(c * eps ** v * (1 - eps) ** (n - v) for v, c in enumerate(fail_counts)))


@numba.njit(cache=True)
def _dependent_set_counts(col_masks):
    n = col_masks.shape[0]
    counts = np.zeros(n + 1, dtype=np.int64)
    basis = np.zeros(64, dtype=np.uint64)
    for mask in range(1, 1 << n):
        size = 0
        nb = 0
        dependent = False
        for j in range(n):
            if not (mask >> j) & 1:
                continue
            size += 1
            if dependent:
                continue
            x = col_masks[j]
            for q in range(nb):
                if x ^ basis[q] < x:
                    x ^= basis[q]
            if x == 0:
                dependent = True
            else:
                basis[nb] = x
                nb += 1
                # keep basis sorted by leading bit, descending
                q = nb - 1
                while q > 0 and basis[q] > basis[q - 1]:
                    t = basis[q]
                    basis[q] = basis[q - 1]
                    basis[q - 1] = t
                    q -= 1
        if dependent:
            counts[size] += 1
    return counts


def ml_failure_counts(h: BitMatrix) -> np.ndarray:
    """Number of rank-deficient erasure sets of each size, for ``n <= 24`` and ``r <= 64``."""
    n = h.cols
    if n > 24 or h.rows > 64:
        raise ContractViolation(f"exhaustive enumeration refused for a {h.rows}x{n} matrix")
    dense = h.to_dense().astype(np.uint64)
    weights = np.uint64(1) << np.arange(h.rows, dtype=np.uint64)
    cols = (dense * weights[:, None]).sum(axis=0).astype(np.uint64) if h.rows else np.zeros(n, np.uint64)
    return _dependent_set_counts(cols)
