"""MI curves: a sequence of per-sigma results and their file formats.

Two on-disk forms exist. The CSV is the plotting contract (one row per
sigma, fixed column order); the JSON-lines file carries the full input
distribution for every point and is what the ``compare`` command reads.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

CURVE_COLUMNS = ("sigma", "snr_db", "mi_bits", "method", "lambda", "alpha", "power")


def fmt(x) -> str:
    """17 significant digits, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


@dataclass
class CurvePoint:
    sigma: float
    snr_db: float
    mi_bits: float
    probabilities: np.ndarray
    power: float
    lam: float | None = None
    alpha: float | None = None
    extra: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        rec = {"sigma": self.sigma, "snr_db": self.snr_db, "mi_bits": self.mi_bits}
        if self.alpha is not None:
            rec["alpha"] = self.alpha
        if self.lam is not None:
            rec["lambda"] = self.lam
        rec["power"] = self.power
        rec["probabilities"] = [float(v) for v in self.probabilities]
        rec.update(self.extra)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "CurvePoint":
        rec = dict(rec)
        known = {"sigma", "snr_db", "mi_bits", "alpha", "lambda", "power", "probabilities"}
        extra = {k: v for k, v in rec.items() if k not in known}
        return cls(sigma=float(rec["sigma"]), snr_db=float(rec["snr_db"]),
                   mi_bits=float(rec["mi_bits"]),
                   probabilities=np.asarray(rec["probabilities"], dtype=float),
                   power=float(rec.get("power", math.nan)),
                   lam=rec.get("lambda"), alpha=rec.get("alpha"), extra=extra)


@dataclass
class MiCurve:
    """Per-sigma MI results for one method on one constellation."""

    method: str
    dimension: int
    points: list[CurvePoint] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([p.sigma for p in self.points])

    @property
    def mi(self) -> np.ndarray:
        return np.array([p.mi_bits for p in self.points])

    def sorted(self) -> "MiCurve":
        return MiCurve(self.method, self.dimension, sorted(self.points, key=lambda p: p.sigma))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        for p in self.sorted():
            w.writerow([fmt(p.sigma), fmt(p.snr_db), fmt(p.mi_bits), self.method,
                        fmt(p.lam), fmt(p.alpha), fmt(p.power)])
        return buf.getvalue()

    def to_jsonl(self) -> str:
        lines = []
        for p in self.sorted():
            rec = {"method": self.method, "dimension": self.dimension, **p.to_record()}
            lines.append(json.dumps(rec, sort_keys=False, allow_nan=False, default=_json_default))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str) -> "MiCurve":
        recs = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not recs:
            raise ValueError("empty curve file")
        method = recs[0].get("method", "")
        dim = int(recs[0].get("dimension", 1))
        for r in recs:
            r.pop("method", None)
            r.pop("dimension", None)
        return cls(method, dim, [CurvePoint.from_record(r) for r in recs])


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")
