"""Comparisons between distributions and between MI curves."""

from __future__ import annotations

import numpy as np

from .channel import SnrPoint, awgn_capacity, snr_from_sigma
from .curve import MiCurve
from .errors import DimensionMismatch, GridMismatch, SupportMismatch


def kl_divergence(P, Q) -> float:
    """``D(P || Q)`` in bits; terms with ``P_i = 0`` contribute nothing."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise DimensionMismatch("distributions must have the same length")
    m = P > 0
    if np.any(Q[m] <= 0):
        raise SupportMismatch("Q vanishes where P has mass")
    return float(max(0.0, np.sum(P[m] * (np.log2(P[m]) - np.log2(Q[m])))))


def kl_commutative(P, Q) -> float:
    """Average of the two directed divergences; symmetric by construction."""
    return (kl_divergence(P, Q) + kl_divergence(Q, P)) / 2.0


def check_same_grid(a: MiCurve, b: MiCurve, atol: float = 1e-12) -> None:
    sa, sb = a.sigmas, b.sigmas
    if sa.shape != sb.shape or not np.allclose(sa, sb, rtol=0, atol=atol):
        raise GridMismatch("curves are sampled on different sigma grids")


def curve_difference_energy(a: MiCurve, b: MiCurve) -> float:
    """Sum over the shared sigma grid of squared MI differences."""
    check_same_grid(a, b)
    diff = a.mi - b.mi
    return float(np.sum(diff * diff))


def capacity_gap_report(curve: MiCurve, power: float | None = None) -> list[tuple[float, float]]:
    """``(sigma, AWGN capacity - MI)`` per point, in bits per channel use.

    The capacity is ``log2(1 + SNR)`` for 2-D constellations and half of it
    for 1-D ones. The SNR comes from each point's ``snr_db`` unless ``power``
    is given, in which case it is recomputed as ``power / (m sigma^2)``.
    """
    per_use = 1.0 if curve.dimension == 2 else 0.5
    out = []
    for p in curve:
        if power is None:
            snr = SnrPoint.from_db(p.snr_db)
        else:
            snr = snr_from_sigma(power, p.sigma, curve.dimension)
        out.append((p.sigma, per_use * awgn_capacity(snr) - p.mi_bits))
    return out
