"""Uniform output quantizer and the exact quantized-AWGN transition matrix.

The output alphabet is a Cartesian grid with ``2**bits`` points per dimension.
Each output cell is the set of channel outputs whose nearest grid point is
that cell's point; per dimension that is the interval between midpoints of
adjacent grid points, with half-infinite outer cells. Because the noise
covariance is ``sigma^2 I``, cell probabilities factor over dimensions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .channel import gaussian_interval_prob
from .constellation import Constellation, Family
from .errors import DegenerateConstellation, DimensionMismatch

LAYOUTS = ("centered", "half-open")


@dataclass(frozen=True)
class QuantSettings:
    """How to place the output grid, relative to a constellation and ``sigma``.

    ``bits`` of ``None`` picks :func:`default_bits` for the constellation.
    ``layout`` selects where the ``2**bits`` points sit on ``[lo, hi]``:

    ``"centered"``
        ``linspace(lo, hi, 2**bits)``; both bounds are grid points.
    ``"half-open"``
        ``lo + k * (hi - lo) / 2**bits`` for ``k = 0 .. 2**bits - 1``; the
        upper bound itself is not a grid point.
    """

    bits: int | None = None
    shift_mult: float = 2.0
    layout: str = "centered"

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise ValueError(f"layout must be one of {LAYOUTS}, got {self.layout!r}")

    def bits_for(self, c: Constellation) -> int:
        return self.bits if self.bits is not None else default_bits(c)


def default_bits(c: Constellation) -> int:
    """5 bits/dim for 16-QAM, 6 for 64-QAM and larger, 9 for 1-D alphabets."""
    if c.dimension == 1:
        return 9
    if c.family is Family.QAM and c.size >= 64:
        return 6
    return 5


@dataclass(frozen=True)
class QuantizerGrid:
    """Per-dimension grid points and cell boundaries.

    ``boundaries[d]`` holds the ``2**bits - 1`` interior boundaries of
    dimension ``d``; cell ``k`` is ``(boundaries[k-1], boundaries[k]]`` with
    the outer cells extending to infinity.
    """

    dimension: int
    bits: int
    shift: float
    lo: np.ndarray
    hi: np.ndarray
    points: tuple
    boundaries: tuple
    layout: str = "centered"

    @property
    def points_per_dim(self) -> int:
        return 2**self.bits

    @property
    def size(self) -> int:
        return self.points_per_dim**self.dimension

    def cell_edges(self, d: int) -> np.ndarray:
        """Boundaries of dimension ``d`` padded with ``-inf`` and ``+inf``."""
        return np.concatenate([[-np.inf], self.boundaries[d], [np.inf]])

    def cell_points(self) -> np.ndarray:
        """All grid points in flat (row-major) cell order, shape ``(size, m)``."""
        mesh = np.meshgrid(*self.points, indexing="ij")
        return np.column_stack([g.ravel() for g in mesh])


def build_grid(c: Constellation, sigma: float, shift_multiplier: float = 2.0,
               bits_per_dim: int = 5, layout: str = "centered") -> QuantizerGrid:
    """Grid covering the bounding box of ``c`` widened by ``shift_multiplier * sigma``."""
    if not 1 <= bits_per_dim <= 16:
        raise ValueError(f"bits_per_dim must be in [1, 16], got {bits_per_dim}")
    if shift_multiplier < 0:
        raise ValueError("shift_multiplier must be nonnegative")
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}, got {layout!r}")
    s = shift_multiplier * sigma
    lo = c.points.min(axis=0) - s
    hi = c.points.max(axis=0) + s
    if np.any(hi - lo <= 0):
        raise DegenerateConstellation(
            "output grid has zero width in some dimension; use a positive shift")
    k = 2**bits_per_dim
    points, bounds = [], []
    for d in range(c.dimension):
        if layout == "centered":
            g = np.linspace(lo[d], hi[d], k)
        else:
            g = lo[d] + (hi[d] - lo[d]) * np.arange(k) / k
        g.setflags(write=False)
        b = 0.5 * (g[1:] + g[:-1])
        b.setflags(write=False)
        points.append(g)
        bounds.append(b)
    return QuantizerGrid(c.dimension, bits_per_dim, s, lo, hi, tuple(points),
                         tuple(bounds), layout)


def quantize(grid: QuantizerGrid, y) -> int | np.ndarray:
    """Flat index of the grid point nearest to ``y``; ties go to the lower index.

    ``y`` is a single vector of length ``m`` or an ``(N, m)`` batch.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y.reshape(1)
    single = y.ndim == 1 and y.shape[0] == grid.dimension
    if single:
        y = y[None, :]
    elif y.ndim == 1 and grid.dimension == 1:
        y = y[:, None]
    if y.ndim != 2 or y.shape[1] != grid.dimension:
        raise DimensionMismatch(f"expected {grid.dimension}-dimensional outputs")
    idx = np.zeros(y.shape[0], dtype=np.int64)
    for d in range(grid.dimension):
        # side="left": a point exactly on a boundary lands in the lower cell
        idx = idx * grid.points_per_dim + np.searchsorted(grid.boundaries[d], y[:, d], side="left")
    return int(idx[0]) if single else idx


def per_dimension_probs(c: Constellation, grid: QuantizerGrid, sigma: float) -> list:
    """For each dimension, an ``(n, 2**bits)`` matrix of cell probabilities."""
    out = []
    for d in range(grid.dimension):
        e = grid.cell_edges(d)
        x = c.points[:, d][:, None]
        out.append(gaussian_interval_prob((e[None, :-1] - x) / sigma,
                                          (e[None, 1:] - x) / sigma))
    return out


def transition_matrix(c: Constellation, grid: QuantizerGrid, sigma: float) -> np.ndarray:
    """Row-stochastic ``p(q | x)``, shape ``(n, 2**(bits * m))``."""
    if c.dimension != grid.dimension:
        raise DimensionMismatch("constellation and grid dimensions differ")
    probs = per_dimension_probs(c, grid, sigma)
    if grid.dimension == 1:
        return probs[0]
    a, b = probs
    return (a[:, :, None] * b[:, None, :]).reshape(c.size, -1)


def channel_matrix(c: Constellation, sigma: float, quant: QuantSettings | None = None) -> np.ndarray:
    """Build the grid for ``(c, sigma)`` under ``quant`` and return its transition matrix."""
    quant = quant or QuantSettings()
    grid = build_grid(c, sigma, quant.shift_mult, quant.bits_for(c), quant.layout)
    return transition_matrix(c, grid, sigma)


def matrix_to_csv(W: np.ndarray) -> str:
    """One CSV row per input symbol, 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(W):
        writer.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [list(map(float, r)) for r in csv.reader(io.StringIO(text)) if r]
    return np.array(rows)
