"""Erasure decoders: BP peeling, ML by Gaussian elimination, and sliding-window near-ML.

All three share one incremental peeling state. Each check keeps its number
of erased participants and the XOR of its known participants, so resolving
a bit costs O(column degree), and a check whose count drops to one goes on
a stack. ML solves the residual system after peeling in one shot. The
window decoder does the same on the checks of a cyclically sliding window of
a QC code, commits only forced bits, and re-peels after each commit.

A window starting at block ``ws`` covers block columns ``ws .. ws+W-1``
(mod M0) and uses the tail-biting block rows ``ws .. ws+W-1-mu``, which are
exactly the rows whose support lies inside the span. When ``W - mu >= M0``
the window is the whole system.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ContractViolation, DecodingInvariantError
from .gf2 import BitMatrix, _forced_from_rref, _rref

MODE_BP = 0
MODE_ML = 1
MODE_SWML = 2


class DecodeStatus(enum.Enum):
    RECOVERED = "recovered"
    PARTIAL = "partial"
    FAILED = "failed"


@dataclass(frozen=True)
class ErasureWord:
    """Channel output: known bit values plus an erasure mask.

    Values at erased positions are ignored.
    """

    bits: np.ndarray
    erased: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8).reshape(-1) & 1
        erased = np.asarray(self.erased, dtype=bool).reshape(-1)
        if bits.shape != erased.shape:
            raise ContractViolation(f"bits length {bits.size} != mask length {erased.size}")
        object.__setattr__(self, "bits", np.where(erased, 0, bits).astype(np.uint8))
        object.__setattr__(self, "erased", erased)

    @property
    def n(self) -> int:
        return self.bits.size

    @property
    def num_erased(self) -> int:
        return int(self.erased.sum())

    @classmethod
    def from_codeword(cls, codeword, erased) -> ErasureWord:
        return cls(np.asarray(codeword, dtype=np.uint8), erased)

    @classmethod
    def all_erased(cls, n: int) -> ErasureWord:
        return cls(np.zeros(n, dtype=np.uint8), np.ones(n, dtype=bool))


@dataclass
class DecodeStats:
    peel_resolved: int = 0
    window_resolved: int = 0
    windows_solved: int = 0
    passes: int = 0
    elimination_ops: int = 0

    @property
    def erasures_resolved(self) -> int:
        return self.peel_resolved + self.window_resolved


@dataclass(frozen=True)
class DecodeResult:
    word: ErasureWord
    status: DecodeStatus
    stats: DecodeStats = field(default_factory=DecodeStats)


@dataclass(frozen=True)
class SwmlConfig:
    w_blocks: int
    shift_blocks: int = 1
    max_passes: int = 15
    repeel: bool = True

    def __post_init__(self):
        if self.shift_blocks < 1:
            raise ContractViolation(f"shift_blocks must be >= 1, got {self.shift_blocks}")
        if self.max_passes < 1:
            raise ContractViolation(f"max_passes must be >= 1, got {self.max_passes}")
        if self.w_blocks < 1:
            raise ContractViolation(f"w_blocks must be >= 1, got {self.w_blocks}")


class TannerGraph:
    """Check-to-variable (CSR) and variable-to-check (CSC) adjacency of ``h``."""

    __slots__ = ("rows", "cols", "check_ptr", "check_vars", "var_ptr", "var_checks")

    def __init__(self, rows, cols, check_ptr, check_vars, var_ptr, var_checks):
        self.rows = rows
        self.cols = cols
        self.check_ptr = check_ptr
        self.check_vars = check_vars
        self.var_ptr = var_ptr
        self.var_checks = var_checks

    @classmethod
    def from_matrix(cls, h: BitMatrix) -> TannerGraph:
        if h._graph is not None:
            return h._graph
        dense = h.to_dense()
        r_idx, c_idx = np.nonzero(dense)
        check_ptr = np.zeros(h.rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(r_idx, minlength=h.rows), out=check_ptr[1:])
        order = np.lexsort((r_idx, c_idx))
        var_ptr = np.zeros(h.cols + 1, dtype=np.int64)
        np.cumsum(np.bincount(c_idx, minlength=h.cols), out=var_ptr[1:])
        g = cls(
            h.rows, h.cols,
            check_ptr, c_idx.astype(np.int64),
            var_ptr, r_idx[order].astype(np.int64),
        )
        h._graph = g
        return g


# ---------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True, nogil=True)
def _peel_init(check_ptr, check_vars, bits, erased, cnt, par, stack):
    """Fill per-check counters; return the initial stack height."""
    top = 0
    for c in range(cnt.shape[0]):
        k = 0
        p = 0
        for e in range(check_ptr[c], check_ptr[c + 1]):
            v = check_vars[e]
            if erased[v]:
                k += 1
            else:
                p ^= bits[v]
        cnt[c] = k
        par[c] = p
        if k == 1:
            stack[top] = c
            top += 1
    return top


@numba.njit(cache=True, nogil=True)
def _resolve(v, val, bits, erased, cnt, par, var_ptr, var_checks, stack, top):
    bits[v] = val
    erased[v] = 0
    for e in range(var_ptr[v], var_ptr[v + 1]):
        c = var_checks[e]
        cnt[c] -= 1
        par[c] ^= val
        if cnt[c] == 1:
            stack[top] = c
            top += 1
    return top


@numba.njit(cache=True, nogil=True)
def _peel_drain(check_ptr, check_vars, var_ptr, var_checks, bits, erased, cnt, par,
                stack, top, block_ver, block_size, version):
    """Peel until no degree-one check remains. Returns (stack top, resolved)."""
    resolved = 0
    while top > 0:
        top -= 1
        c = stack[top]
        if cnt[c] != 1:
            continue
        for e in range(check_ptr[c], check_ptr[c + 1]):
            v = check_vars[e]
            if erased[v]:
                top = _resolve(v, par[c], bits, erased, cnt, par, var_ptr, var_checks, stack, top)
                block_ver[v // block_size] = version
                resolved += 1
                break
    return top, resolved


@numba.njit(cache=True, nogil=True)
def _solve_rows(rows, check_ptr, check_vars, var_ptr, var_checks, bits, erased, cnt, par,
                stack, top, loc, block_ver, block_size, version):
    """Eliminate on the erased unknowns of ``rows`` and commit forced bits.

    Returns ``(stack top, resolved, xors, consistent)``.
    """
    m = 0
    sel = np.empty(rows.shape[0], dtype=np.int64)
    nv = 0
    var_list = np.empty(64, dtype=np.int64)
    for q in range(rows.shape[0]):
        c = rows[q]
        if cnt[c] == 0:
            if par[c]:
                return top, 0, 0, False
            continue
        sel[m] = c
        m += 1
        for e in range(check_ptr[c], check_ptr[c + 1]):
            v = check_vars[e]
            if erased[v] and loc[v] < 0:
                if nv == var_list.shape[0]:
                    grown = np.empty(2 * nv, dtype=np.int64)
                    grown[:nv] = var_list
                    var_list = grown
                loc[v] = nv
                var_list[nv] = v
                nv += 1
    if nv == 0:
        return top, 0, 0, True
    words = (nv + 63) >> 6
    mat = np.zeros((m, words), dtype=np.uint64)
    rhs = np.empty(m, dtype=np.uint8)
    for i in range(m):
        c = sel[i]
        rhs[i] = par[c]
        for e in range(check_ptr[c], check_ptr[c + 1]):
            v = check_vars[e]
            if erased[v]:
                j = loc[v]
                mat[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    for j in range(nv):
        loc[var_list[j]] = -1
    pivots, xors = _rref(mat, rhs, nv, True)
    consistent, forced, values = _forced_from_rref(mat, rhs, pivots, nv)
    if not consistent:
        return top, 0, xors, False
    resolved = 0
    for j in range(nv):
        if forced[j]:
            v = var_list[j]
            top = _resolve(v, values[j], bits, erased, cnt, par, var_ptr, var_checks, stack, top)
            block_ver[v // block_size] = version
            resolved += 1
    return top, resolved, xors, True


@numba.njit(cache=True, nogil=True)
def _settled_checks_hold(cnt, par):
    """Every check with no erased participant must have even parity."""
    for c in range(cnt.shape[0]):
        if cnt[c] == 0 and par[c]:
            return False
    return True


@numba.njit(cache=True, nogil=True)
def _decode_core(mode, check_ptr, check_vars, var_ptr, var_checks, bits, erased,
                 m0, rb, cb, mu, w_blocks, shift, max_passes, repeel, stats):
    """Decode in place. ``stats`` receives
    (peel resolved, window resolved, windows solved, passes, xors).
    Returns False if an inconsistent system was met."""
    r = check_ptr.shape[0] - 1
    n = bits.shape[0]
    cnt = np.empty(r, dtype=np.int64)
    par = np.empty(r, dtype=np.uint8)
    stack = np.empty(r + 1, dtype=np.int64)
    loc = np.full(n, -1, dtype=np.int64)
    for q in range(5):
        stats[q] = 0
    nblocks = m0 if mode == MODE_SWML else 1
    bsize = cb if mode == MODE_SWML else n
    block_ver = np.zeros(nblocks, dtype=np.int64)
    version = 1
    top = _peel_init(check_ptr, check_vars, bits, erased, cnt, par, stack)
    top, res = _peel_drain(check_ptr, check_vars, var_ptr, var_checks, bits, erased,
                           cnt, par, stack, top, block_ver, bsize, version)
    stats[0] += res
    remaining = 0
    for v in range(n):
        remaining += erased[v]
    if mode == MODE_BP or remaining == 0:
        return _settled_checks_hold(cnt, par)
    if mode == MODE_ML:
        rows = np.arange(r)
        top, res, xors, ok = _solve_rows(rows, check_ptr, check_vars, var_ptr, var_checks,
                                         bits, erased, cnt, par, stack, top, loc,
                                         block_ver, bsize, version)
        stats[1] += res
        stats[2] += 1
        stats[4] += xors
        return ok and _settled_checks_hold(cnt, par)
    # sliding window
    full = w_blocks - mu >= m0
    span = m0 if full else w_blocks
    nrows_blk = m0 if full else w_blocks - mu
    rows = np.empty(nrows_blk * rb, dtype=np.int64)
    n_starts = (m0 + shift - 1) // shift
    solved_at = np.full(n_starts, -1, dtype=np.int64)
    for p in range(max_passes):
        stats[3] += 1
        corrected = 0
        for si in range(n_starts):
            ws = si * shift
            dirty = False
            for b in range(span):
                if block_ver[(ws + b) % m0] > solved_at[si]:
                    dirty = True
                    break
            if not dirty:
                continue
            for t in range(nrows_blk):
                blk = (ws + t) % m0
                for i in range(rb):
                    rows[t * rb + i] = blk * rb + i
            version += 1
            top, res, xors, ok = _solve_rows(rows, check_ptr, check_vars, var_ptr, var_checks,
                                             bits, erased, cnt, par, stack, top, loc,
                                             block_ver, bsize, version)
            stats[2] += 1
            stats[4] += xors
            if not ok:
                return False
            solved_at[si] = version
            stats[1] += res
            corrected += res
            remaining -= res
            if repeel and res > 0:
                version += 1
                top, pres = _peel_drain(check_ptr, check_vars, var_ptr, var_checks, bits, erased,
                                        cnt, par, stack, top, block_ver, bsize, version)
                stats[0] += pres
                corrected += pres
                remaining -= pres
            if remaining == 0:
                return _settled_checks_hold(cnt, par)
        if corrected == 0:
            break
    return _settled_checks_hold(cnt, par)


@numba.njit(cache=True, nogil=True)
def _decode_batch(mode, check_ptr, check_vars, var_ptr, var_checks, uniforms, eps, info_mask,
                  m0, rb, cb, mu, w_blocks, shift, max_passes, repeel):
    """Decode the all-zero word under each row of channel uniforms.

    Returns per-trial (residual erasures, residual info erasures, flags) where
    flag 1 marks a miscorrection and flag 2 an inconsistent system.
    """
    trials, n = uniforms.shape
    residual = np.zeros(trials, dtype=np.int64)
    info_res = np.zeros(trials, dtype=np.int64)
    flags = np.zeros(trials, dtype=np.int64)
    bits = np.zeros(n, dtype=np.uint8)
    erased = np.zeros(n, dtype=np.uint8)
    stats = np.zeros(5, dtype=np.int64)
    for t in range(trials):
        for v in range(n):
            bits[v] = 0
            erased[v] = 1 if uniforms[t, v] < eps else 0
        ok = _decode_core(mode, check_ptr, check_vars, var_ptr, var_checks, bits, erased,
                          m0, rb, cb, mu, w_blocks, shift, max_passes, repeel, stats)
        k = 0
        ki = 0
        bad = 0
        for v in range(n):
            if erased[v]:
                k += 1
                ki += info_mask[v]
            elif bits[v]:
                bad = 1
        residual[t] = k
        info_res[t] = ki
        flags[t] = bad | (0 if ok else 2)
    return residual, info_res, flags


# ---------------------------------------------------------------------------
# public API


def _run(mode, graph: TannerGraph, word: ErasureWord, qc=(1, 1, 1, 0), swml=(1, 1, 1, True)):
    if word.n != graph.cols:
        raise ContractViolation(f"word length {word.n} != code length {graph.cols}")
    bits = word.bits.copy()
    erased = word.erased.astype(np.uint8)
    stats = np.zeros(5, dtype=np.int64)
    m0, rb, cb, mu = qc
    w, s, passes, repeel = swml
    ok = _decode_core(mode, graph.check_ptr, graph.check_vars, graph.var_ptr, graph.var_checks,
                      bits, erased, m0, rb, cb, mu, w, s, passes, repeel, stats)
    if not ok:
        raise DecodingInvariantError("inconsistent parity system: input is not a BEC output of this code")
    out = ErasureWord(bits, erased.astype(bool))
    if out.num_erased == 0:
        status = DecodeStatus.RECOVERED
    elif out.num_erased < word.num_erased:
        status = DecodeStatus.PARTIAL
    else:
        status = DecodeStatus.FAILED
    st = DecodeStats(int(stats[0]), int(stats[1]), int(stats[2]), int(stats[3]), int(stats[4]))
    return DecodeResult(out, status, st)


def bp_peel(h: BitMatrix, word: ErasureWord) -> DecodeResult:
    """Iterative peeling: any check with one erased bit fixes that bit."""
    return _run(MODE_BP, TannerGraph.from_matrix(h), word)


def ml_decode(h: BitMatrix, word: ErasureWord) -> DecodeResult:
    """Peel, then eliminate on the residual system and commit forced bits."""
    return _run(MODE_ML, TannerGraph.from_matrix(h), word)


def check_swml(code, cfg: SwmlConfig) -> None:
    if cfg.w_blocks <= code.mu:
        raise ContractViolation(f"window of {cfg.w_blocks} blocks must exceed mu={code.mu}")
    if cfg.shift_blocks > code.m0:
        raise ContractViolation(f"shift of {cfg.shift_blocks} blocks exceeds M0={code.m0}")


def swml_decode(code, word: ErasureWord, cfg: SwmlConfig) -> DecodeResult:
    """Peel, then sweep ML-decoded windows around the tail-biting code."""
    check_swml(code, cfg)
    qc = (code.m0, code.c - code.b, code.c, code.mu)
    return _run(MODE_SWML, code.graph, word, qc,
                (cfg.w_blocks, cfg.shift_blocks, cfg.max_passes, cfg.repeel))
