"""Blahut-Arimoto capacity iteration and an independent projected-gradient oracle.

All logarithms are base 2, so ``epsilon`` and every reported value are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import snr_from_sigma
from .constellation import Constellation, average_power
from .curve import CurvePoint, MiCurve
from .errors import ConvergenceFailure
from .mi_discrete import check_transition_matrix, mi_discrete
from .quantizer import QuantSettings, channel_matrix

# Keeps log2(Q) finite when an iterate underflows.
Q_FLOOR = 1e-300
GRAD_CAP = 1e3


@dataclass
class BaResult:
    distribution: np.ndarray
    capacity_bits: float       # exact MI of ``distribution``
    iterations: int
    converged: bool
    i_star: float = math.nan   # last value of log2 sum_x r_x
    upper_bound: float = math.nan  # max_x D(p(.|x) || p_Y), >= capacity
    trace: list = field(default_factory=list, repr=False)


def _log2_safe(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    nz = v > 0
    out[nz] = np.log2(v[nz])
    return out


def divergences(W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``D(p(.|x) || p_Y)`` in bits for every input ``x`` when the input pmf is ``q``.

    Rows that put mass on cells with ``p_Y = 0`` (possible only for ``q_x = 0``)
    get ``+inf``.
    """
    py = q @ W
    P = np.broadcast_to(py, W.shape)
    nz = (W > 0) & (P > 0)
    logratio = np.zeros_like(W)
    logratio[nz] = np.log2(W[nz]) - np.log2(P[nz])
    D = np.sum(W * logratio, axis=1)
    D[np.any((W > 0) & (P == 0), axis=1)] = np.inf
    return D


def posterior(W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``G[x, y] = q_x p(y|x) / sum_x' q_x' p(y|x')``; columns with ``p(y) = 0`` are left at 0."""
    joint = q[:, None] * W
    py = joint.sum(axis=0)
    G = np.zeros_like(joint)
    nz = py > 0
    G[:, nz] = joint[:, nz] / py[nz]
    return G


def ba_capacity(W, epsilon: float = 1e-7, max_iters: int = 100_000,
                initial=None, keep_trace: bool = False) -> BaResult:
    """Capacity of the channel ``W`` (rows: inputs) by Blahut-Arimoto.

    Each iteration forms the posterior ``G`` from the current ``Q``, sets
    ``r_x = 2**(sum_y p(y|x) log2 G[x, y])``, ``Q = r / sum(r)`` and
    ``I* = log2 sum_x r_x``, stopping once ``I*`` moves by at most ``epsilon``.
    ``I*`` is nondecreasing and bounded by the capacity.
    """
    W = check_transition_matrix(W)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n = W.shape[0]
    Q = np.full(n, 1.0 / n) if initial is None else np.asarray(initial, dtype=float).copy()
    # sum_y W log2 G = log2 Q_x + sum_y W log2 W - sum_y W log2 p_Y
    wlogw = np.sum(W * _log2_safe(W), axis=1)
    prev = -math.inf
    i_star = -math.inf
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        py = Q @ W
        log_r = np.log2(np.maximum(Q, Q_FLOOR)) + wlogw - W @ _log2_safe(py)
        top = log_r.max()
        r = np.exp2(log_r - top)
        i_star = float(top + math.log2(r.sum()))
        Q = r / r.sum()
        if keep_trace:
            trace.append(i_star)
        if abs(i_star - prev) <= epsilon:
            converged = True
            break
        prev = i_star
    D = divergences(W, Q)
    return BaResult(distribution=Q, capacity_bits=mi_discrete(W, Q), iterations=it,
                    converged=converged, i_star=i_star, upper_bound=float(D.max()),
                    trace=trace)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-and-threshold)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - css / k > 0)[-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(v - tau, 0.0)


def numerical_capacity_oracle(W, tolerance: float = 1e-9, max_iters: int = 200_000) -> BaResult:
    """Maximise ``I(p; W)`` over the simplex by spectral projected gradient ascent.

    The gradient of the MI in bits is ``D_x - log2(e)``; the constant drops out
    under simplex projection. The stopping rule is the Frank-Wolfe gap
    ``max_x D_x - I(p)``, which bounds the distance to capacity from above.
    Raises :class:`ConvergenceFailure` if the gap is still above ``tolerance``
    when the budget runs out.
    """
    W = check_transition_matrix(W)
    n = W.shape[0]
    p = np.full(n, 1.0 / n)

    def value_grad(q):
        # an infinite divergence only says "add mass here"; a large cap keeps steps finite
        D = np.minimum(divergences(W, q), GRAD_CAP)
        return mi_discrete(W, q), D

    f, g = value_grad(p)
    step = 1.0
    gap = math.inf
    for it in range(1, max_iters + 1):
        gap = float(g.max() - f)
        if gap <= tolerance:
            return BaResult(p, mi_discrete(W, p), it, True, f, float(g.max()))
        # Armijo backtracking along the projection arc; the slack of a few ulps
        # lets the iterate keep moving once gains in f drop below resolution
        t = step
        slack = 8 * np.finfo(float).eps * max(1.0, abs(f))
        while True:
            cand = project_simplex(p + t * g)
            fc, gc = value_grad(cand)
            if fc >= f + 1e-4 * g @ (cand - p) - slack or t < 1e-16:
                break
            t *= 0.5
        s, y = cand - p, gc - g
        p, f, g = cand, fc, gc
        sy = float(s @ y)
        # Barzilai-Borwein step for a concave objective (s.y < 0)
        step = float(s @ s) / -sy if sy < 0 else 1.0
        step = min(max(step, 1e-10), 1e10)
    raise ConvergenceFailure(f"optimality gap {gap:.3g} above tolerance {tolerance:.3g}")


def ba_sweep(c: Constellation, sigmas, quant: QuantSettings | None = None,
             epsilon: float = 1e-7, max_iters: int = 100_000) -> MiCurve:
    """BA capacity of the *fixed* constellation ``c`` at every sigma.

    The constellation is not rescaled; the optimal input may carry more power
    than the uniform one, and the recorded SNR uses that actual power.
    """
    quant = quant or QuantSettings()
    curve = MiCurve("ba", c.dimension)
    for sigma in sigmas:
        sigma = float(sigma)
        res = ba_capacity(channel_matrix(c, sigma, quant), epsilon, max_iters)
        power = average_power(c, res.distribution)
        curve.points.append(CurvePoint(
            sigma=sigma, snr_db=snr_from_sigma(power, sigma, c.dimension).snr_db,
            mi_bits=res.capacity_bits, probabilities=res.distribution, power=power,
            extra={"iterations": res.iterations, "converged": res.converged}))
    return curve
