"""Frame-error bounds for ML decoding on the BEC.

Every bound is a sum over erasure counts of ``C(n,v) eps^v (1-eps)^(n-v)``
weighted by a conditional failure term. Terms are accumulated in the natural
log domain (``logsumexp``) because binomials at n ~ 1000 overflow doubles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py, xlogy

from .errors import ContractViolation
from .spectrum import Spectrum

LN2 = math.log(2.0)


class BoundKind(enum.Enum):
    SPHERE_PACKING = "sphere"
    TIGHT_LOWER = "tight-lower"
    RANDOM_LINEAR = "random-linear"
    S_BOUND = "s-bound"
    R_BOUND_RU = "rbound-ru"
    R_BOUND_GALLAGER = "rbound-gallager"


@dataclass
class BoundCurve:
    kind: BoundKind
    points: list[tuple[float, float]]
    params: dict = field(default_factory=dict)

    @property
    def eps(self) -> np.ndarray:
        return np.array([e for e, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p for _, p in self.points])

    def is_monotone(self, rtol: float = 1e-9) -> bool:
        v = self.values
        return bool(np.all(v[1:] >= v[:-1] * (1 - rtol) - 1e-300))


def log_comb(n, k):
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _log_pattern_prob(n: int, v, eps: float):
    """``log[C(n,v) eps^v (1-eps)^(n-v)]`` elementwise over ``v``."""
    v = np.asarray(v, dtype=float)
    return log_comb(n, v) + xlogy(v, eps) + xlog1py(n - v, -eps)


def _finish(log_terms) -> float:
    log_terms = np.asarray(log_terms, dtype=float).ravel()
    if log_terms.size == 0:
        return 0.0
    lse = logsumexp(log_terms)
    if not np.isfinite(lse):
        return 0.0
    return float(min(1.0, math.exp(min(lse, 0.0))))


def _check_eps(eps: float):
    if not 0.0 <= eps <= 1.0:
        raise ContractViolation(f"erasure probability {eps} outside [0, 1]")


def _tail_terms(n: int, r: int, eps: float):
    return _log_pattern_prob(n, np.arange(r + 1, n + 1), eps)


def lower_sphere_packing(n: int, k: int, eps: float) -> float:
    """Probability of more than ``r = n - k`` erasures."""
    _check_eps(eps)
    if not 0 <= k <= n:
        raise ContractViolation(f"need 0 <= k <= n, got k={k}, n={n}")
    return _finish(_tail_terms(n, n - k, eps))


def lower_tightened(n: int, k: int, d0: int, eps: float) -> float:
    """Sphere-packing bound plus patterns of at most ``r`` erasures covering a weight-``d0`` word."""
    _check_eps(eps)
    r = n - k
    if not 1 <= d0 <= r:
        raise ContractViolation(f"need 1 <= d0 <= r={r}, got d0={d0}")
    w = np.arange(d0, r + 1)
    cover = log_comb(n - d0, w - d0) + xlogy(w, eps) + xlog1py(n - w, -eps)
    return _finish(np.concatenate([_tail_terms(n, r, eps), cover]))


def _log_rank_failure_exact(v: np.ndarray, r: int) -> np.ndarray:
    """``log(1 - prod_{j<v} (1 - 2^(j-r)))`` for each ``v <= r``."""
    j = np.arange(r)
    cum = np.concatenate([[0.0], np.cumsum(np.log1p(-np.exp2(j - r)))])
    log_prod = cum[v]
    with np.errstate(divide="ignore"):
        return np.log(-np.expm1(log_prod))


def upper_random_linear(n: int, r: int, eps: float, exact_rank_product: bool = True) -> float:
    """Ensemble-average FER of random ``[n, n-r]`` linear codes."""
    _check_eps(eps)
    v = np.arange(1, min(r, n) + 1)
    if exact_rank_product:
        cond = _log_rank_failure_exact(v, r)
    else:
        cond = np.minimum(0.0, (v - r) * LN2)
    body = cond + _log_pattern_prob(n, v, eps)
    return _finish(np.concatenate([_tail_terms(n, r, eps), body]))


def upper_s_bound(spec_vec: Spectrum, d_min: int, eps: float) -> float:
    """Union bound over erasure patterns covering the support of some codeword."""
    _check_eps(eps)
    if d_min < 1:
        raise ContractViolation("d_min must be >= 1")
    n = spec_vec.n
    log_a = np.array([_log_fraction(c) for c in spec_vec.coeffs])
    terms = []
    for i in range(d_min, n + 1):
        w = np.arange(d_min, i + 1)
        la = log_a[w]
        keep = np.isfinite(la)
        if not keep.any():
            continue
        inner = logsumexp(la[keep] + log_comb(n - w[keep], i - w[keep]))
        count = min(float(log_comb(n, i)), inner)
        terms.append(count + xlogy(i, eps) + xlog1py(n - i, -eps))
    return _finish(terms)


def _log_fraction(x) -> float:
    if x == 0:
        return -math.inf
    return math.log(x.numerator) - math.log(x.denominator)


def _log_ratio_comb(n: int, v: np.ndarray, k: int) -> np.ndarray:
    """``log[C(n-v, K) / C(n, K)]``, ``-inf`` when ``n - v < K``."""
    out = np.full(v.shape, -np.inf)
    ok = n - v >= k
    out[ok] = log_comb(n - v[ok], k) - log_comb(n, k)
    return out


def upper_r_bound_ru(n: int, j: int, k_row: int, eps: float) -> float:
    """Rank-based bound for the RU (J,K) ensemble average."""
    _check_eps(eps)
    if (n * j) % k_row:
        raise ContractViolation("n*J must be divisible by K")
    r = n * j // k_row
    v = np.arange(1, r + 1)
    log_b = (v - r) * LN2 + r * np.log1p(np.exp(_log_ratio_comb(n, v, k_row)))
    body = np.minimum(0.0, log_b) + _log_pattern_prob(n, v, eps)
    return _finish(np.concatenate([_tail_terms(n, r, eps), body]))


def _log_comb_continuous(m: float, x: np.ndarray) -> np.ndarray:
    return gammaln(m + 1) - gammaln(x + 1) - gammaln(m - x + 1)


def upper_r_bound_gallager(n: int, j: int, k_row: int, eps: float) -> float:
    """Rank-based bound for the Gallager (J,K) ensemble average.

    ``C(M, mu/J)`` is evaluated through log-gamma for fractional ``mu/J``.
    The conditional failure estimate for each erasure count is capped at 1.
    """
    _check_eps(eps)
    if n % k_row:
        raise ContractViolation("n must be a multiple of K")
    m = n // k_row
    r = m * j
    terms = [_tail_terms(n, r, eps)]
    for v in range(1, r + 1):
        mu = np.arange(0, (j * (n - v)) // k_row + 1)
        rank_term = np.minimum(0.0, (mu + v - r) * LN2)
        count_term = (
            log_comb(mu + j - 1, j - 1)
            + j * _log_comb_continuous(m, mu / j)
            + mu * k_row * math.log((n - v) / n)
        )
        inner = min(0.0, logsumexp(rank_term + np.minimum(0.0, count_term)))
        terms.append(np.atleast_1d(inner + _log_pattern_prob(n, v, eps)))
    return _finish(np.concatenate(terms))


def curve(kind: BoundKind | str, eps_grid, **params) -> BoundCurve:
    """Evaluate one bound over ``eps_grid``.

    ``params`` by kind: sphere ``n, k``; tight-lower ``n, k, d0``;
    random-linear ``n, r, exact_rank_product``; s-bound ``spectrum, d_min``;
    rbound-* ``n, j, k_row``.
    """
    kind = BoundKind(kind)
    grid = sorted(float(e) for e in eps_grid)
    fn = {
        BoundKind.SPHERE_PACKING: lambda e: lower_sphere_packing(params["n"], params["k"], e),
        BoundKind.TIGHT_LOWER: lambda e: lower_tightened(params["n"], params["k"], params["d0"], e),
        BoundKind.RANDOM_LINEAR: lambda e: upper_random_linear(
            params["n"], params["r"], e, params.get("exact_rank_product", True)
        ),
        BoundKind.S_BOUND: lambda e: upper_s_bound(params["spectrum"], params["d_min"], e),
        BoundKind.R_BOUND_RU: lambda e: upper_r_bound_ru(params["n"], params["j"], params["k_row"], e),
        BoundKind.R_BOUND_GALLAGER: lambda e: upper_r_bound_gallager(
            params["n"], params["j"], params["k_row"], e
        ),
    }[kind]
    meta = {key: val for key, val in params.items() if key != "spectrum"}
    if kind is BoundKind.R_BOUND_GALLAGER:
        meta["binomial_extension"] = "log-gamma continuous C(M, mu/J)"
    return BoundCurve(kind, [(e, fn(e)) for e in grid], meta)
