"""Discrete-time AWGN channel: SNR bookkeeping, Gaussian CDF, noise sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import InvalidDimension


@dataclass(frozen=True)
class AwgnChannel:
    """Noise with per-dimension standard deviation ``sigma`` on ``dimension`` axes."""

    sigma: float
    dimension: int = 1

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        _check_dim(self.dimension)


@dataclass(frozen=True)
class SnrPoint:
    snr_linear: float

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr_linear)

    @classmethod
    def from_db(cls, snr_db: float) -> "SnrPoint":
        return cls(10.0 ** (snr_db / 10.0))


def _check_dim(m: int) -> None:
    if m not in (1, 2):
        raise InvalidDimension(f"dimension must be 1 or 2, got {m}")


def snr_from_sigma(signal_power: float, sigma: float, m: int) -> SnrPoint:
    """SNR of a signal of average power ``signal_power`` over noise ``sigma``.

    The noise power is ``sigma**2`` per real dimension, so a complex (m=2)
    channel sees ``2 sigma**2``.
    """
    _check_dim(m)
    if not (signal_power > 0 and sigma > 0):
        raise ValueError("signal power and sigma must be positive")
    return SnrPoint(signal_power / (m * sigma**2))


def sigma_from_snr(signal_power: float, snr: SnrPoint | float, m: int) -> float:
    """Inverse of :func:`snr_from_sigma`."""
    _check_dim(m)
    lin = snr.snr_linear if isinstance(snr, SnrPoint) else float(snr)
    return math.sqrt(signal_power / (m * lin))


def awgn_capacity(snr: SnrPoint | float) -> float:
    """Shannon-Hartley capacity ``log2(1 + SNR)`` in bits per two dimensions.

    Halve it when comparing against a one-dimensional constellation.
    """
    lin = snr.snr_linear if isinstance(snr, SnrPoint) else float(snr)
    return math.log2(1.0 + lin)


def gaussian_cdf(z):
    """Standard normal CDF.

    Delegates to ``scipy.special.ndtr`` (Cephes erf/erfc), whose absolute
    error is at the double-precision rounding level; accepts scalars or arrays.
    """
    out = ndtr(z)
    return float(out) if np.ndim(out) == 0 else out


def gaussian_interval_prob(lower, upper):
    """``P(lower < Z <= upper)`` for a standard normal ``Z``, elementwise.

    Intervals in the upper half are evaluated through the complementary CDF
    so tail probabilities keep their relative precision.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    upper_half = lower > 0
    direct = ndtr(upper) - ndtr(lower)
    mirrored = ndtr(-lower) - ndtr(-upper)
    return np.where(upper_half, mirrored, direct)


def sample_noise(sigma: float, m: int, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. ``N(0, sigma^2 I_m)`` vectors, shape ``(count, m)``.

    Deterministic for a given seed (numpy PCG64).
    """
    _check_dim(m)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    return sigma * rng.standard_normal((count, m))
