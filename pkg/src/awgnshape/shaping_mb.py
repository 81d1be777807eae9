"""Maxwell-Boltzmann input distributions and best-lambda envelopes.

``p(x) ~ exp(-lambda ||x||^2)``. Positive lambda favours low-energy symbols,
negative lambda the outer ones. Lambda always refers to the constellation as
given (before any unit-energy rescaling): if the points are later scaled by
``g`` the same pmf is MB with parameter ``lambda / g**2`` on the scaled points.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import snr_from_sigma
from .constellation import Constellation, average_power
from .curve import CurvePoint, MiCurve
from .errors import ZeroEnergy
from .mi_discrete import conditional_entropies, mi_discrete, mi_discrete_batch
from .quantizer import QuantSettings, channel_matrix


def mb_distribution(c: Constellation, lam: float) -> np.ndarray:
    """MB pmf over ``c``; symbols of equal energy get identical probability."""
    return mb_distributions(c, [lam])[0]


def mb_distributions(c: Constellation, lambdas) -> np.ndarray:
    """One MB pmf per lambda, shape ``(len(lambdas), n)``."""
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    if not np.all(np.isfinite(lambdas)):
        raise ValueError("lambda must be finite")
    # Work on distinct energies so equal-norm symbols share bit-identical mass.
    shells, inverse = np.unique(c.energies, return_inverse=True)
    counts = np.bincount(inverse)
    logw = -lambdas[:, None] * shells[None, :]
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    z = w @ counts
    return (w / z[:, None])[:, inverse]


def mb_unit_energy_system(c: Constellation, lam: float) -> tuple[Constellation, np.ndarray]:
    """MB pmf for ``lam`` and ``c`` rescaled to unit average power under it."""
    d = mb_distribution(c, lam)
    power = average_power(c, d)
    if power <= 0:
        raise ZeroEnergy("constellation has zero energy under the MB distribution")
    return c.scaled(1.0 / math.sqrt(power)), d


def negative_lambda_grid(count: int = 1500, v_max: float = 4.5) -> np.ndarray:
    """``1 - exp(v)`` for ``count`` values of ``v`` evenly spaced on ``[0, v_max]``."""
    return 1.0 - np.exp(np.linspace(0.0, v_max, count))


def _pick(mis: np.ndarray, lambdas: np.ndarray) -> int:
    """Index of the best MI; exact ties go to the smallest ``|lambda|``."""
    best = np.flatnonzero(mis == mis.max())
    return int(best[np.argmin(np.abs(lambdas[best]))])


def mb_envelope(c: Constellation, lambdas, sigmas, quant: QuantSettings | None = None,
                unit_energy: bool = True) -> MiCurve:
    """Per sigma, the best MB lambda and its MI on the quantized channel.

    With ``unit_energy`` the constellation is rescaled for every lambda so the
    transmitted power is one, and the quantizer follows the rescaled points.
    Without it ``c`` is used as given and the power varies with lambda.
    """
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    sigmas = [float(s) for s in sigmas]
    if lambdas.size == 0 or not sigmas:
        raise ValueError("lambda and sigma grids must be nonempty")
    quant = quant or QuantSettings()
    P = mb_distributions(c, lambdas)
    powers = P @ c.energies
    curve = MiCurve("mb-envelope", c.dimension)
    for sigma in sigmas:
        if unit_energy:
            mis = np.empty(lambdas.size)
            for k in range(lambdas.size):
                if powers[k] <= 0:
                    raise ZeroEnergy("constellation has zero energy under the MB distribution")
                W = channel_matrix(c.scaled(1.0 / math.sqrt(powers[k])), sigma, quant)
                mis[k] = mi_discrete_batch(W, P[k])[0]
        else:
            W = channel_matrix(c, sigma, quant)
            mis = mi_discrete_batch(W, P, conditional_entropies(W))
        j = _pick(mis, lambdas)
        # report the winner with the literal double sum, like every other curve
        scale = 1.0 / math.sqrt(powers[j]) if unit_energy else 1.0
        mi = mi_discrete(channel_matrix(c.scaled(scale), sigma, quant), P[j])
        power = 1.0 if unit_energy else float(powers[j])
        curve.points.append(CurvePoint(
            sigma=sigma, snr_db=snr_from_sigma(power, sigma, c.dimension).snr_db,
            mi_bits=mi, probabilities=P[j], power=power, lam=float(lambdas[j])))
    return curve
