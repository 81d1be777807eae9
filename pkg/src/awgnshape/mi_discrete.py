"""Exact mutual information of the quantized channel, in bits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import Constellation, check_distribution
from .errors import DimensionMismatch, InvalidMatrix
from .quantizer import QuantSettings, channel_matrix


def check_transition_matrix(W, atol: float = 1e-10) -> np.ndarray:
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise InvalidMatrix("transition matrix must be two-dimensional")
    if np.any(W < 0) or np.any(W > 1 + atol) or not np.all(np.isfinite(W)):
        raise InvalidMatrix("transition probabilities must lie in [0, 1]")
    if np.max(np.abs(W.sum(axis=1) - 1.0)) > atol:
        raise InvalidMatrix("transition matrix rows must sum to 1")
    return W


def _aligned(W, d):
    W = np.asarray(W, dtype=float)
    d = np.asarray(d, dtype=float)
    if W.ndim != 2 or d.shape != (W.shape[0],):
        raise DimensionMismatch(
            f"distribution of shape {d.shape} does not match matrix of shape {W.shape}")
    return W, check_distribution(d)


def _xlog2x(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    nz = v > 0
    out[nz] = v[nz] * np.log2(v[nz])
    return out


def mi_discrete(W, d) -> float:
    """``sum_x p(x) sum_y p(y|x) log2(p(y|x) / p(y))`` with ``0 log 0 = 0``."""
    W, d = _aligned(W, d)
    active = d > 0
    Wa = W[active]
    py = d[active] @ Wa
    PY = np.broadcast_to(py, Wa.shape)
    # p(y) can underflow to 0 only when every p(x) p(y|x) does; such terms vanish
    nz = (Wa > 0) & (PY > 0)
    # difference of logs: the ratio itself can overflow for subnormal p(y)
    logratio = np.zeros_like(Wa)
    logratio[nz] = np.log2(Wa[nz]) - np.log2(PY[nz])
    inner = np.sum(Wa * logratio, axis=1)
    return float(max(0.0, d[active] @ inner))


def conditional_entropies(W) -> np.ndarray:
    """``H(Y | X = x)`` for every row."""
    return -np.sum(_xlog2x(np.asarray(W, dtype=float)), axis=1)


def mi_entropy_decomposition(W, d) -> float:
    """``H(Y) - H(Y|X)``; an independent route to :func:`mi_discrete`."""
    W, d = _aligned(W, d)
    h_y = -np.sum(_xlog2x(d @ W))
    h_y_given_x = d @ conditional_entropies(W)
    return float(h_y - h_y_given_x)


def mi_discrete_batch(W, P, row_entropy: np.ndarray | None = None) -> np.ndarray:
    """MI for many input distributions at once; ``P`` has one distribution per row.

    Uses the entropy decomposition, which needs a single pass over ``W`` per
    distribution. ``row_entropy`` may carry a precomputed
    :func:`conditional_entropies` of ``W``.
    """
    W = np.asarray(W, dtype=float)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if row_entropy is None:
        row_entropy = conditional_entropies(W)
    h_y = -np.sum(_xlog2x(P @ W), axis=1)
    return np.maximum(h_y - P @ row_entropy, 0.0)


@dataclass(frozen=True)
class ShiftSweepPoint:
    multiplier: float
    mi: float
    mi_minus_min: float


def quantizer_shift_sweep(c: Constellation, d, sigma: float, multipliers,
                          bits: int, layout: str = "centered") -> list[ShiftSweepPoint]:
    """MI versus quantizer shift ``s = multiplier * sigma``.

    Each point also carries its MI minus the smallest MI of the sweep.
    """
    multipliers = [float(m) for m in multipliers]
    if not multipliers:
        raise ValueError("at least one shift multiplier is required")
    if any(m < 0 for m in multipliers):
        raise ValueError("shift multipliers must be nonnegative")
    mis = [mi_discrete(channel_matrix(c, sigma, QuantSettings(bits, m, layout)), d)
           for m in multipliers]
    floor = min(mis)
    return [ShiftSweepPoint(m, v, v - floor) for m, v in zip(multipliers, mis)]
