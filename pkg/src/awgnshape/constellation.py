"""Finite input alphabets (PAM, QAM, PSK, 8-AMPM) and their statistics.

Points are stored as an ``(n, m)`` float array. Input distributions are plain
1-D numpy arrays aligned with the points; :func:`check_distribution` is the
single place where they are validated.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDistribution,
    NonPositiveGain,
    UnsupportedSize,
    ZeroEnergy,
)

# Ratio of outer to inner radius for 8-AMPM. At this ratio the inner-inner
# and inner-outer distances coincide, which maximises the minimum distance
# at fixed energy: rho**2 - sqrt(2)*rho - 1 = 0.
AMPM_RADIUS_RATIO = (math.sqrt(2.0) + math.sqrt(6.0)) / 2.0


class Family(str, enum.Enum):
    PAM = "pam"
    QAM = "qam"
    PSK = "psk"
    AMPM = "ampm"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Constellation:
    """An ordered, immutable set of symbol coordinates.

    Attributes
    ----------
    points : ndarray, shape (n, m)
        Symbol coordinates. ``m`` is 1 (real channel) or 2 (complex channel).
    family : Family
    label : str
        Human readable name, e.g. ``"16-QAM"``.
    """

    points: np.ndarray
    family: Family = Family.CUSTOM
    label: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] not in (1, 2):
            raise DimensionMismatch(
                f"points must have shape (n, 1) or (n, 2), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation points must be finite")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("constellation points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if not self.label:
            object.__setattr__(self, "label", f"{len(pts)}-{self.family.value.upper()}")

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def energies(self) -> np.ndarray:
        """Squared norm ``||x||^2`` of every symbol."""
        return np.sum(self.points**2, axis=1)

    def scaled(self, factor: float) -> "Constellation":
        return Constellation(self.points * factor, self.family, self.label)

    def __len__(self):
        return self.size


def _pam_levels(n: int) -> np.ndarray:
    return np.arange(-(n - 1), n, 2, dtype=float)


def make_constellation(family: Family | str, n: int) -> Constellation:
    """Canonical, *unnormalised* constellation of the given family and size.

    PAM uses the odd integers ``{±1, ±3, ...}`` in ascending order, QAM the
    Cartesian product of two PAMs (row-major, first coordinate outer), PSK
    ``n`` unit vectors counterclockwise from angle 0.

    8-AMPM is two 4-point rings rotated by 45 degrees with respect to each
    other: an inner ring of radius 1 at angles 45, 135, 225, 315 degrees,
    followed by an outer ring of radius ``AMPM_RADIUS_RATIO`` at angles 0, 90,
    180, 270 degrees.
    """
    family = Family(family)
    if family is Family.PAM:
        if n < 2:
            raise UnsupportedSize(f"PAM needs n >= 2, got {n}")
        return Constellation(_pam_levels(n)[:, None], family, f"{n}-PAM")
    if family is Family.QAM:
        side = math.isqrt(n) if n > 0 else 0
        if side * side != n or side < 2 or side % 2:
            raise UnsupportedSize(
                f"QAM needs n to be the square of an even integer, got {n}")
        lv = _pam_levels(side)
        pts = np.array([(a, b) for a in lv for b in lv])
        return Constellation(pts, family, f"{n}-QAM")
    if family is Family.PSK:
        if n < 2:
            raise UnsupportedSize(f"PSK needs n >= 2, got {n}")
        ang = 2 * np.pi * np.arange(n) / n
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        # exact zeros keep the symmetric layouts exactly symmetric
        pts[np.abs(pts) < 1e-15] = 0.0
        return Constellation(pts, family, f"{n}-PSK")
    if family is Family.AMPM:
        if n != 8:
            raise UnsupportedSize(f"only 8-AMPM is supported, got n={n}")
        inner = np.pi / 4 + np.pi / 2 * np.arange(4)
        outer = np.pi / 2 * np.arange(4)
        pts = np.vstack([
            np.column_stack([np.cos(inner), np.sin(inner)]),
            AMPM_RADIUS_RATIO * np.column_stack([np.cos(outer), np.sin(outer)]),
        ])
        pts[np.abs(pts) < 1e-15] = 0.0
        return Constellation(pts, family, "8-AMPM")
    raise UnsupportedSize("custom constellations are built from points directly")


def uniform(n: int | Constellation) -> np.ndarray:
    n = len(n) if isinstance(n, Constellation) else n
    return np.full(n, 1.0 / n)


def check_distribution(p, n: int | None = None, *, strict: bool = False,
                       atol: float = 1e-12) -> np.ndarray:
    """Validate a probability vector and return it as a float array.

    ``strict`` additionally requires every entry to be positive.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise InvalidDistribution("distribution must be one-dimensional")
    if n is not None and p.shape[0] != n:
        raise DimensionMismatch(f"distribution has {p.shape[0]} entries, expected {n}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidDistribution("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > atol:
        raise InvalidDistribution(f"probabilities sum to {p.sum()!r}, not 1")
    if strict and np.any(p == 0):
        raise InvalidDistribution("strictly positive probabilities required")
    return p


def average_power(c: Constellation, d) -> float:
    """``sum_i p_i ||x_i||^2``."""
    d = np.asarray(d, dtype=float)
    if d.shape != (c.size,):
        raise DimensionMismatch(f"distribution has shape {d.shape}, expected ({c.size},)")
    return float(d @ c.energies)


def normalize_unit_energy(c: Constellation, reference=None) -> Constellation:
    """Scale ``c`` so that its average power under ``reference`` is one.

    ``reference`` defaults to the uniform distribution.
    """
    if reference is None:
        reference = uniform(c)
    power = average_power(c, reference)
    if power <= 0:
        raise ZeroEnergy("constellation has zero energy under the reference distribution")
    return c.scaled(1.0 / math.sqrt(power))


def apply_gain(c: Constellation, alpha: float) -> Constellation:
    if not alpha > 0:
        raise NonPositiveGain(f"gain must be positive, got {alpha}")
    return c.scaled(alpha)


def entropy(d) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    d = np.asarray(d, dtype=float)
    nz = d[d > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def to_json(c: Constellation, d=None) -> str:
    doc = {
        "dimension": c.dimension,
        "points": c.points.tolist(),
        "probabilities": (np.asarray(d, dtype=float) if d is not None
                          else uniform(c)).tolist(),
        "family": c.family.value,
        "label": c.label,
    }
    return json.dumps(doc, indent=2)


def from_json(text: str) -> tuple[Constellation, np.ndarray]:
    """Parse ``{"dimension", "points", "probabilities"}``; probabilities optional."""
    doc = json.loads(text)
    pts = np.asarray(doc["points"], dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if "dimension" in doc and pts.shape[1] != int(doc["dimension"]):
        raise DimensionMismatch("'dimension' does not match the point coordinates")
    c = Constellation(pts, Family(doc.get("family", "custom")), doc.get("label", ""))
    probs = doc.get("probabilities")
    d = check_distribution(probs, c.size) if probs is not None else uniform(c)
    return c, d


def load(path: str | Path) -> tuple[Constellation, np.ndarray]:
    return from_json(Path(path).read_text())
