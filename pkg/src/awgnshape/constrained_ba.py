"""Power-constrained Blahut-Arimoto with an input gain.

For a fixed gain ``alpha`` the inner loop maximises I(X; Y) subject to
``sum_x p(x) alpha^2 ||x||^2 = P``. Each iteration

1. computes ``T_x = sum_y p(y|x) log2 p(x|y)`` for the current input pmf,
2. finds the multiplier ``lambda`` solving
   ``g(lambda) = sum_x (P - a_x) 2**(T_x + lambda a_x) = 0`` with ``a_x = alpha^2 ||x||^2``,
3. sets ``p(x) ~ 2**(T_x + lambda a_x)``.

``g(lambda) / sum_x 2**(T_x + lambda a_x)`` equals ``P`` minus the power of
the tilted pmf, which is nonincreasing in ``lambda``; a root exists iff
``min a_x < P < max a_x`` (or every ``a_x == P``). Gains outside that window
are *infeasible*, and the outer search over ``alpha`` skips them.

The outer search evaluates ``n`` evenly spaced gains, keeps the best one
``alpha_cap`` and zooms into ``alpha_cap +/- (alpha_max - alpha_min) / (n - 1)``,
``depth`` times.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .channel import snr_from_sigma
from .constellation import Constellation, apply_gain, check_distribution
from .curve import CurvePoint, MiCurve
from .errors import AllGainsInfeasible, DegenerateDistribution, NoRoot
from .mi_discrete import mi_discrete
from .quantizer import QuantSettings, channel_matrix

P_FLOOR = 1e-300
BRACKET_EXPONENTS = range(0, 61)


@dataclass(frozen=True)
class GainSearchConfig:
    alpha_min: float = 0.5
    alpha_max: float = 4.0
    points_per_depth: int = 50
    depth: int = 20
    inner_epsilon: float = 1e-7
    power: float = 1.0
    max_inner_iters: int = 100_000

    def __post_init__(self):
        if not 0 < self.alpha_min < self.alpha_max:
            raise ValueError("need 0 < alpha_min < alpha_max")
        if self.points_per_depth < 3:
            raise ValueError("points_per_depth must be at least 3")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if not self.power > 0:
            raise ValueError("power target must be positive")


@dataclass
class ConstrainedBaResult:
    distribution: np.ndarray
    alpha: float
    lam: float
    mi_bits: float
    achieved_power: float
    converged: bool
    iterations: int = 0
    feasible: bool = True
    at_boundary: bool = False
    intervals: list = field(default_factory=list, repr=False)


def compute_t(W, d) -> np.ndarray:
    """``T_x = sum_y p(y|x) log2 p(x|y)``; cells with zero posterior contribute 0.

    This is ``E_Y[p(x|Y) log2 p(x|Y) / p(x)]`` after using
    ``p(y) p(x|y) / p(x) = p(y|x)``.
    """
    W = np.asarray(W, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DegenerateDistribution("T_x needs a strictly positive input distribution")
    joint = d[:, None] * W
    py = joint.sum(axis=0)
    nz = joint > 0
    logpost = np.zeros_like(W)
    logpost[nz] = np.log2(joint[nz] / np.broadcast_to(py, W.shape)[nz])
    return np.sum(W * logpost, axis=1)


def _tilted(T, a, lam):
    e = T + lam * a
    e = e - e.max()
    w = np.exp2(e)
    return w / w.sum()


def _power_excess(T, a, P, lam):
    """``g(lambda)`` divided by its positive normaliser: ``P - sum_x p_lambda(x) a_x``."""
    return P - _tilted(T, a, lam) @ a


def g_function(T, a, P, lam) -> float:
    """``g(lambda)`` scaled by ``2**(-max exponent)``; same sign as the raw sum."""
    e = np.asarray(T) + lam * np.asarray(a)
    return float(np.sum((P - np.asarray(a)) * np.exp2(e - e.max())))


def solve_lagrange_lambda(T, c: Constellation, alpha: float, P: float = 1.0,
                          *, allow_no_root: bool = False) -> float:
    """Multiplier ``lambda`` that makes the tilted pmf meet the power target.

    Scans ``[-2**k, 2**k]`` for ``k = 0..60`` until ``g`` changes sign, then
    refines with Brent's method. Raises :class:`NoRoot` when ``g`` keeps one
    sign; with ``allow_no_root`` the scanned endpoint with the smallest
    ``|g|`` is returned instead, mimicking a solver that reports its best
    attempt.
    """
    T = np.asarray(T, dtype=float)
    a = alpha**2 * c.energies
    if np.all(a == P):
        return 0.0
    h = lambda lam: _power_excess(T, a, P, lam)  # noqa: E731
    if h(0.0) == 0.0:
        return 0.0
    lo = hi = None
    for k in BRACKET_EXPONENTS:
        b = 2.0**k
        h_lo, h_hi = h(-b), h(b)
        if h_lo == 0.0:
            return -b
        if h_hi == 0.0:
            return b
        if np.sign(h_lo) != np.sign(h_hi):
            lo, hi = -b, b
            break
    if lo is None:
        if allow_no_root:
            b = 2.0 ** BRACKET_EXPONENTS[-1]
            return -b if abs(g_function(T, a, P, -b)) <= abs(g_function(T, a, P, b)) else b
        raise NoRoot(f"g(lambda) has constant sign for alpha={alpha:g}")
    # tighten the bracket to the half that holds the root before refining
    if np.sign(h(0.0)) == np.sign(h(lo)):
        lo = 0.0
    else:
        hi = 0.0
    return float(brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


def gain_is_feasible(c: Constellation, alpha: float, P: float = 1.0) -> bool:
    a = alpha**2 * c.energies
    return bool(np.all(a == P) or (a.min() < P < a.max()))


def modified_ba(W_alpha, c_alpha: Constellation, alpha: float, P: float = 1.0,
                epsilon: float = 1e-7, max_iters: int = 100_000, *,
                allow_no_root: bool = False, initial=None) -> ConstrainedBaResult:
    """Inner constrained-BA loop for one gain.

    ``c_alpha`` is the *unscaled* constellation and ``W_alpha`` the transition
    matrix of ``alpha * c_alpha`` (so ``a_x = alpha^2 ||x||^2``). Starts from
    the uniform pmf and stops once the MI changes by at most ``epsilon``.
    """
    W = np.asarray(W_alpha, dtype=float)
    n = W.shape[0]
    p = np.full(n, 1.0 / n) if initial is None else check_distribution(initial, n)
    a = alpha**2 * c_alpha.energies
    prev = mi_discrete(W, p)
    lam = 0.0
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        T = compute_t(W, np.maximum(p, P_FLOOR))
        lam = solve_lagrange_lambda(T, c_alpha, alpha, P, allow_no_root=allow_no_root)
        p = _tilted(T, a, lam)
        mi = mi_discrete(W, p)
        if abs(mi - prev) <= epsilon:
            converged = True
            break
        prev = mi
    power = float(p @ a)
    return ConstrainedBaResult(distribution=p, alpha=alpha, lam=lam, mi_bits=mi,
                               achieved_power=power, converged=converged, iterations=it,
                               feasible=abs(power - P) <= 1e-6)


def gain_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (hi - lo) * np.arange(n) / (n - 1)


def next_interval(lo: float, hi: float, alpha_cap: float, n: int) -> tuple[float, float]:
    """Zoomed interval around ``alpha_cap``, clamped to the current one."""
    step = (hi - lo) / (n - 1)
    return max(lo, alpha_cap - step), min(hi, alpha_cap + step)


def search_gains(evaluate: Callable[[float], ConstrainedBaResult | None],
                 cfg: GainSearchConfig) -> ConstrainedBaResult:
    """Logarithmic gain search driven by ``evaluate``; ``None`` marks an infeasible gain."""
    lo, hi = cfg.alpha_min, cfg.alpha_max
    best = None
    intervals = []
    for depth in range(cfg.depth):
        intervals.append((lo, hi))
        round_best = None
        for alpha in gain_grid(lo, hi, cfg.points_per_depth):
            res = evaluate(float(alpha))
            if res is None:
                continue
            if round_best is None or res.mi_bits > round_best.mi_bits:
                round_best = res
        if round_best is None:
            if depth == 0:
                raise AllGainsInfeasible(
                    f"no gain in [{cfg.alpha_min}, {cfg.alpha_max}] admits the power constraint")
            break
        if best is None or round_best.mi_bits > best.mi_bits:
            best = round_best
        lo, hi = next_interval(lo, hi, round_best.alpha, cfg.points_per_depth)
    best.intervals = intervals
    tol = 1e-12 * cfg.alpha_max
    best.at_boundary = (abs(best.alpha - cfg.alpha_min) <= tol
                        or abs(best.alpha - cfg.alpha_max) <= tol)
    return best


def gain_search(c: Constellation, sigma: float, cfg: GainSearchConfig = GainSearchConfig(),
                quant: QuantSettings | None = None, *,
                exclude_infeasible: bool = True) -> ConstrainedBaResult:
    """Best gain and input pmf for ``c`` at noise level ``sigma`` under the power target.

    The quantizer grid is rebuilt around every scaled constellation. With
    ``exclude_infeasible=False`` gains without a multiplier are not skipped;
    their inner loop runs on the closest-to-feasible multiplier instead, which
    reproduces the failure mode of a search that trusts such gains.
    """
    quant = quant or QuantSettings()

    def evaluate(alpha):
        if exclude_infeasible and not gain_is_feasible(c, alpha, cfg.power):
            return None
        W = channel_matrix(apply_gain(c, alpha), sigma, quant)
        try:
            return modified_ba(W, c, alpha, cfg.power, cfg.inner_epsilon, cfg.max_inner_iters,
                               allow_no_root=not exclude_infeasible)
        except NoRoot:
            return None

    return search_gains(evaluate, cfg)


def cba_sweep(c: Constellation, sigmas, cfg: GainSearchConfig = GainSearchConfig(),
              quant: QuantSettings | None = None, *,
              exclude_infeasible: bool = True) -> MiCurve:
    """:func:`gain_search` at every sigma; SNR is ``P / sigma^2`` per dimension."""
    curve = MiCurve("cba", c.dimension)
    for sigma in sigmas:
        sigma = float(sigma)
        res = gain_search(c, sigma, cfg, quant, exclude_infeasible=exclude_infeasible)
        curve.points.append(CurvePoint(
            sigma=sigma, snr_db=snr_from_sigma(cfg.power, sigma, c.dimension).snr_db,
            mi_bits=res.mi_bits, probabilities=res.distribution, power=res.achieved_power,
            lam=res.lam, alpha=res.alpha,
            extra={"converged": res.converged, "feasible": res.feasible,
                   "at_boundary": res.at_boundary}))
    return curve
