"""Seeded Monte Carlo estimation of model correlations.

Randomness comes from a counter-based generator (Philox) keyed by the
seed: the value of draw ``i`` depends only on ``(seed, i)``, never on
how many draws preceded it in this process. Draws are evaluated in
fixed-size blocks whose partial sums are reduced in block order, so the
estimate is a pure function of (model, settings, n, seed), bit-identical
across runs, worker counts, and scheduling.

Standard normals are produced by the inverse normal CDF applied to
uniforms of the form ((word >> 12) + 0.5) * 2**-52, which are strictly
inside (0, 1) and symmetric about 1/2, keeping the transform finite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import ValidationError
from .lhv import HiddenVariableModel, SpaceKind

#: Draws per evaluation block. Fixed so that block boundaries (and hence
#: the reduction order of partial sums) never depend on the worker count.
BLOCK_DRAWS = 1 << 16

_MAX_SEED = 1 << 64


@dataclass(frozen=True)
class CorrelationEstimate:
    """Sample mean of xi1*xi2 with its normal-approximation standard error."""

    mean: float
    stderr: float
    n: int
    seed: int


@dataclass(frozen=True)
class ComparisonReport:
    """Monte Carlo estimate against an exact value, as a z-score.

    ``inconsistent`` flags the degenerate case stderr = 0 with
    mean != exact, where no finite z-score exists.
    """

    exact: float
    estimate: CorrelationEstimate
    z_score: float
    inconsistent: bool


def _raw_words(seed: int, word_offset: int, n_words: int) -> np.ndarray:
    # Philox advances its counter in blocks of four 64-bit words.
    if word_offset % 4:
        raise ValidationError(f"word offset must be 4-aligned, got {word_offset}")
    bg = np.random.Philox(key=seed)
    if word_offset:
        bg.advance(word_offset // 4)
    return bg.random_raw(n_words)


def _finite_block_values(model, s1, s2, seed):
    weights = np.array(model.space.weights)
    cum = np.cumsum(weights)
    k = len(weights)
    products = np.array([
        model.response1.value(s1, atom) * model.response2.value(s2, atom)
        for atom in range(k)
    ])

    def values(start: int, count: int) -> np.ndarray:
        raw = _raw_words(seed, start, count)
        u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
        idx = np.searchsorted(cum, u, side="right")
        np.minimum(idx, k - 1, out=idx)
        return products[idx]

    return values


def _gaussian_block_values(model, s1, s2, seed):
    u_coeff = model.response1.coefficients(s1)
    v_coeff = model.response2.coefficients(s2)

    def values(start: int, count: int) -> np.ndarray:
        raw = _raw_words(seed, 2 * start, 2 * count)
        u = ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52
        eta = ndtri(u).reshape(count, 2)
        xi1 = eta[:, 0] * u_coeff[0] + eta[:, 1] * u_coeff[1]
        xi2 = eta[:, 0] * v_coeff[0] + eta[:, 1] * v_coeff[1]
        return xi1 * xi2

    return values


def mc_estimate(model: HiddenVariableModel, s1, s2, n: int, seed: int, *,
                workers: int = 1) -> CorrelationEstimate:
    """Estimate E[xi1(s1) xi2(s2)] from ``n`` independent draws.

    ``workers`` only parallelizes block evaluation; it never changes the
    result. The standard error uses the unbiased (n - 1) variance.
    """
    if not isinstance(n, int) or n < 2:
        raise ValidationError(f"sample count must be an integer >= 2, got {n!r}")
    if not isinstance(seed, int) or not 0 <= seed < _MAX_SEED:
        raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    if model.space.kind is SpaceKind.FINITE:
        values = _finite_block_values(model, s1, s2, seed)
    else:
        values = _gaussian_block_values(model, s1, s2, seed)

    def block_stats(index: int) -> tuple[float, float]:
        start = index * BLOCK_DRAWS
        count = min(BLOCK_DRAWS, n - start)
        x = values(start, count)
        return float(np.sum(x)), float(np.sum(x * x))

    n_blocks = (n + BLOCK_DRAWS - 1) // BLOCK_DRAWS
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(block_stats, range(n_blocks)))
    else:
        stats = [block_stats(i) for i in range(n_blocks)]

    # fsum is exactly rounded, so the reduction is independent of grouping.
    total = math.fsum(s for s, _ in stats)
    total_sq = math.fsum(q for _, q in stats)
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return CorrelationEstimate(mean=mean, stderr=math.sqrt(var / n), n=n, seed=seed)


def compare(exact: float, est: CorrelationEstimate) -> ComparisonReport:
    """z-score of an estimate against an exact value."""
    if est.stderr == 0.0:
        if est.mean == exact:
            return ComparisonReport(exact, est, 0.0, inconsistent=False)
        return ComparisonReport(exact, est, math.copysign(math.inf, est.mean - exact),
                                inconsistent=True)
    return ComparisonReport(exact, est, (est.mean - exact) / est.stderr, inconsistent=False)
