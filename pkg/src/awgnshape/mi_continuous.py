"""Monte-Carlo mutual information of the unquantized AWGN channel.

With ``W ~ N(0, sigma^2 I)`` shared by every transmitted symbol,

    I(X; Y) = -sum_x p(x) E_W[ log2 sum_x' p(x') exp(-(|W + x - x'|^2 - |W|^2) / (2 sigma^2)) ]

The exponent expands to ``-(|d|^2 + 2 W.d) / (2 sigma^2)`` with ``d = x - x'``,
and the inner sum is evaluated as a weighted log-sum-exp, since it
overflows for small sigma otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .channel import sample_noise
from .constellation import Constellation, check_distribution, uniform

LOG2E = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class McConfig:
    sample_count: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")


@dataclass(frozen=True)
class McEstimate:
    mi: float        # clamped to [0, log2 n]
    raw: float       # before clamping
    stderr: float    # standard error of the mean over noise samples


def _log2_inner(c: Constellation, x_index: int, w: np.ndarray, sigma: float,
                logp: np.ndarray) -> np.ndarray:
    """``log2 sum_x' p(x') exp(...)`` for every noise sample, symbol ``x_index`` sent."""
    d = c.points[x_index] - c.points                     # (n, m)
    expo = -(np.sum(d**2, axis=1)[None, :] + 2.0 * w @ d.T) / (2.0 * sigma**2)
    return logsumexp(expo + logp[None, :], axis=1) * LOG2E


def mc_estimate(c: Constellation, d, sigma: float, cfg: McConfig = McConfig(),
                noise: np.ndarray | None = None) -> McEstimate:
    """Full Monte-Carlo estimate with diagnostics; see :func:`mi_mc_general`."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    d = check_distribution(d, c.size)
    if noise is None:
        noise = sample_noise(sigma, c.dimension, cfg.sample_count, cfg.seed)
    per_sample = np.zeros(noise.shape[0])
    if np.all(d == d[0]):
        # uniform input: unit weights inside, the 1/n factor becomes log2 n
        n = c.size
        logp = np.zeros(n)
        for i in range(n):
            per_sample += _log2_inner(c, i, noise, sigma, logp)
        per_sample = per_sample / n - math.log2(n)
    else:
        with np.errstate(divide="ignore"):
            logp = np.log(d)
        for i in np.flatnonzero(d > 0):
            per_sample += d[i] * _log2_inner(c, i, noise, sigma, logp)
    raw = float(-per_sample.mean())
    stderr = float(per_sample.std(ddof=1) / math.sqrt(len(per_sample))) if len(per_sample) > 1 else 0.0
    clamped = min(max(raw, 0.0), math.log2(c.size))
    return McEstimate(clamped, raw, stderr)


def mi_mc_general(c: Constellation, d, sigma: float, cfg: McConfig = McConfig()) -> float:
    """MI in bits for input distribution ``d``; zero-probability symbols are skipped."""
    return mc_estimate(c, d, sigma, cfg).mi


def mi_mc_uniform(c: Constellation, sigma: float, cfg: McConfig = McConfig()) -> float:
    """MI in bits for the uniform input, ``log2 n - (1/n) sum_x E_W[...]``."""
    if c.size == 1:
        return 0.0
    return mc_estimate(c, uniform(c), sigma, cfg).mi
