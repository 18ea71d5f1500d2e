"""Asymptotic error exponent of the RU rank bound and the resulting ML-threshold lower bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.special import entr, xlog1py, xlogy

from .errors import ContractViolation

LN2 = math.log(2.0)

# (J, K) cells with a value from the threshold equation, by rate row.
TABLE2_CELLS: tuple[tuple[int, int], ...] = (
    (3, 4), (6, 8), (9, 12),
    (4, 6), (6, 9), (8, 12),
    (3, 6), (4, 8), (5, 10), (6, 12), (8, 16), (9, 18),
    (3, 9), (4, 12), (5, 15), (6, 18), (8, 24), (9, 27),
    (3, 12), (4, 16), (5, 20), (6, 24), (8, 32), (9, 36),
)


@dataclass(frozen=True)
class ExponentEval:
    alpha: float
    f1: float
    f2: float
    f3: float
    e_of_eps: float


def _binary_entropy(alpha):
    return entr(alpha) + entr(1.0 - alpha)


def f1(alpha, eps):
    """Divergence of an ``alpha`` erasure fraction from the channel, in nats."""
    return -_binary_entropy(alpha) - xlogy(alpha, eps) - xlog1py(1.0 - alpha, -eps)


def f3(alpha, j: int, k_row: int):
    rho = j / k_row
    return (alpha - rho) * LN2 + rho * np.log1p((1.0 - alpha) ** k_row)


def _objective(alpha, eps, j, k_row):
    v1 = f1(alpha, eps)
    return np.maximum(v1, v1 - f3(alpha, j, k_row))


def exponent(j: int, k_row: int, eps: float, grid_step: float = 1e-4) -> ExponentEval:
    """Minimise ``max(F1, F2)`` over the erasure fraction.

    A dense grid locates the minimiser, then golden-section search refines it
    inside the neighbouring grid cells.
    """
    if not 0.0 < eps < 1.0:
        raise ContractViolation(f"eps must lie in (0, 1), got {eps}")
    grid = np.linspace(0.0, 1.0, int(round(1.0 / grid_step)) + 1)
    grid = np.union1d(grid, [eps])
    vals = _objective(grid, eps, j, k_row)
    i = int(np.argmin(vals))
    alpha, best = float(grid[i]), float(vals[i])
    if 0 < i < grid.size - 1 and vals[i] < vals[i - 1] and vals[i] < vals[i + 1]:
        try:
            res = minimize_scalar(
                lambda a: float(_objective(a, eps, j, k_row)),
                bracket=(grid[i - 1], grid[i], grid[i + 1]),
                method="golden",
                options={"xtol": 1e-12},
            )
            if res.fun < best and 0.0 <= res.x <= 1.0:
                alpha, best = float(res.x), float(res.fun)
        except ValueError:
            pass
    a1 = float(f1(alpha, eps))
    a3 = float(f3(alpha, j, k_row))
    return ExponentEval(alpha, a1, a1 - a3, a3, max(best, 0.0))


def threshold_residual(eps: float, j: int, k_row: int) -> float:
    return j / k_row * (1.0 - math.log1p((1.0 - eps) ** k_row) / LN2) - eps


def ml_threshold_lower(j: int, k_row: int, xtol: float = 1e-13) -> float:
    """Nontrivial root of the fixed-point threshold equation, by bisection.

    The bracket is ``[1e-6, J/K]``: the residual is positive near zero
    whenever J >= 2 and negative at the capacity point ``J/K``.
    """
    if j < 2 or k_row <= j:
        raise ContractViolation(f"need J >= 2 and K > J, got J={j}, K={k_row}")
    lo, hi = 1e-6, j / k_row
    if not (threshold_residual(lo, j, k_row) > 0 > threshold_residual(hi, j, k_row)):
        raise ArithmeticError(f"threshold bracket has no sign change for J={j}, K={k_row}")
    return float(bisect(threshold_residual, lo, hi, args=(j, k_row), xtol=xtol))


def truncate(x: float, places: int = 8) -> str:
    """Decimal string of ``x`` cut (not rounded) after ``places`` digits."""
    scaled = math.floor(x * 10 ** places)
    return f"{scaled / 10 ** places:.{places}f}"


def table2() -> list[dict]:
    rows = []
    for j, k_row in TABLE2_CELLS:
        t = ml_threshold_lower(j, k_row)
        rows.append({
            "J": j,
            "K": k_row,
            "rate": f"{k_row - j}/{k_row}",
            "threshold": t,
            "threshold_8dp": truncate(t),
        })
    return rows
