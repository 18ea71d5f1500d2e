"""Random streams.

Ensemble sampling uses numpy's PCG64 generator seeded through ``SeedSequence``.

Channel trials use Philox4x64-10, a counter-based generator: the uniforms of
trial ``t`` start at counter block ``t * ceil(n / 4)`` under key ``seed``, so a
trial's erasure pattern depends only on ``(seed, t)`` and never on how trials
are batched or distributed over workers. All erasure probabilities threshold
the same uniforms, which makes patterns nested across an ε grid.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def spawn(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators for parallel tasks."""
    return [make_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def trial_uniforms(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start .. start+count-1``; shape ``(count, n)``."""
    blocks = -(-n // 4)
    if count == 0 or n == 0:
        return np.zeros((count, n))
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start * blocks)
    u = np.random.Generator(bitgen).random(count * blocks * 4)
    return u.reshape(count, blocks * 4)[:, :n]
