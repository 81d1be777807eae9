"""Command-line driver.

    awgnshape mi-curve  ...   MI of a fixed input distribution over a sigma/SNR grid
    awgnshape optimize  {mb-envelope,ba,cba} ...   optimised distributions per sigma
    awgnshape compare A.jsonl B.jsonl ...   per-sigma differences of two runs

With ``--out PREFIX`` each command writes ``PREFIX.csv``, ``PREFIX.jsonl``
(optimize / mi-curve: one distribution per sigma) and ``PREFIX.json`` (the
full run configuration). Without it the CSV goes to standard output.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import check_same_grid, curve_difference_energy, kl_commutative
from .blahut_arimoto import ba_sweep
from .channel import sigma_from_snr, snr_from_sigma
from .constellation import (
    Family,
    average_power,
    check_distribution,
    load,
    make_constellation,
    normalize_unit_energy,
    uniform,
)
from .constrained_ba import GainSearchConfig, cba_sweep
from .curve import CurvePoint, MiCurve, fmt
from .errors import (
    AllGainsInfeasible,
    ConvergenceFailure,
    NoRoot,
    ShapingError,
    SupportMismatch,
)
from .mi_continuous import McConfig, mc_estimate
from .mi_discrete import mi_discrete
from .quantizer import QuantSettings, channel_matrix
from .shaping_mb import mb_distribution, mb_envelope, negative_lambda_grid

MI_CURVE_COLUMNS = ("sigma", "snr_db", "mi_bits", "estimator", "param")
COMPARE_COLUMNS = ("sigma", "mi_a", "mi_b", "mi_diff", "kl_commutative")


NUMERICAL_ERRORS = (NoRoot, ConvergenceFailure, AllGainsInfeasible)


class UsageError(Exception):
    """Bad command-line input; exit code 2."""


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included within half a step), ``a,b,c`` or a single value."""
    try:
        if ":" in text:
            parts = [float(v) for v in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 0.5)) + 1
            return [round(start + k * step, 12) for k in range(count)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"invalid grid {text!r}; expected start:stop:step or a,b,c") from None


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"invalid range {text!r}; expected lo:hi") from None
    return lo, hi


# ---------------------------------------------------------------- setup

def _constellation(args):
    if args.constellation_file:
        c, d = load(args.constellation_file)
        return c, d
    if not args.family or not args.size:
        raise UsageError("give --family and --size, or --constellation-file")
    c = make_constellation(Family(args.family), args.size)
    if not args.raw:
        c = normalize_unit_energy(c)
    return c, uniform(c)


def _quant(args) -> QuantSettings:
    return QuantSettings(args.bits, args.shift_mult, args.grid_layout)


def _sigmas(args, c, d) -> list[float]:
    if args.sigma and args.snr_db:
        raise UsageError("--sigma and --snr-db are mutually exclusive")
    if args.sigma:
        sig = parse_grid(args.sigma)
        if any(s <= 0 for s in sig):
            raise UsageError("sigma values must be positive")
        return sig
    if args.snr_db:
        power = average_power(c, d)
        return [sigma_from_snr(power, 10 ** (v / 10), c.dimension) for v in parse_grid(args.snr_db)]
    raise UsageError("give --sigma or --snr-db")


def _distribution(spec: str, c, file_dist):
    if spec == "uniform":
        return uniform(c), "uniform"
    if spec.startswith("mb:"):
        try:
            lam = float(spec[3:])
        except ValueError:
            raise UsageError(f"invalid MB parameter in {spec!r}") from None
        return mb_distribution(c, lam), spec
    if spec == "file":
        return file_dist, "file"
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown distribution {spec!r}")
    doc = json.loads(path.read_text())
    probs = doc["probabilities"] if isinstance(doc, dict) else doc
    return check_distribution(probs, c.size), f"file:{path.name}"


def _lambdas(spec: str) -> np.ndarray:
    if spec.startswith("negative"):
        count = int(spec.split(":")[1]) if ":" in spec else 1500
        return negative_lambda_grid(count)
    return np.asarray(parse_grid(spec))


# ---------------------------------------------------------------- output

def _write_outputs(args, csv_text: str, jsonl_text: str | None, config: dict) -> None:
    if not args.out:
        sys.stdout.write(csv_text)
        return
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{prefix}.csv").write_text(csv_text)
    if jsonl_text is not None:
        Path(f"{prefix}.jsonl").write_text(jsonl_text)
    Path(f"{prefix}.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    cfg["version"] = __version__
    return cfg


# ---------------------------------------------------------------- commands

def cmd_mi_curve(args) -> None:
    c, file_dist = _constellation(args)
    d, label = _distribution(args.distribution, c, file_dist)
    if args.unit_energy:
        c = normalize_unit_energy(c, d)
    sigmas = _sigmas(args, c, d)
    quant = _quant(args)
    power = average_power(c, d)
    curve = MiCurve(f"mi-curve-{args.estimator}", c.dimension)
    for k, sigma in enumerate(sigmas):
        if args.estimator == "mc":
            mi = mc_estimate(c, d, sigma, McConfig(args.samples, args.seed + k)).mi
        else:
            mi = mi_discrete(channel_matrix(c, sigma, quant), d)
        curve.points.append(CurvePoint(sigma, snr_from_sigma(power, sigma, c.dimension).snr_db,
                                       mi, d, power))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MI_CURVE_COLUMNS)
    for p in curve.sorted():
        w.writerow([fmt(p.sigma), fmt(p.snr_db), fmt(p.mi_bits), args.estimator, label])
    _write_outputs(args, buf.getvalue(), curve.to_jsonl(), _config(args))


def cmd_optimize(args) -> None:
    c, _ = _constellation(args)
    sigmas = _sigmas(args, c, uniform(c))
    quant = _quant(args)
    if args.method == "mb-envelope":
        curve = mb_envelope(c, _lambdas(args.lambdas), sigmas, quant,
                            unit_energy=not args.no_unit_energy)
    elif args.method == "ba":
        curve = ba_sweep(c, sigmas, quant, args.eps, args.max_iters)
    else:
        lo, hi = parse_range(args.alpha_range)
        try:
            cfg = GainSearchConfig(lo, hi, args.points_per_depth, args.depth, args.inner_eps,
                                   args.power, args.max_iters)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        curve = cba_sweep(c, sigmas, cfg, quant, exclude_infeasible=not args.keep_infeasible_gains)
    _write_outputs(args, curve.to_csv(), curve.to_jsonl(), _config(args))


def cmd_compare(args) -> None:
    try:
        a = MiCurve.from_jsonl(Path(args.first).read_text()).sorted()
        b = MiCurve.from_jsonl(Path(args.second).read_text()).sorted()
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read curve files: {exc}") from None
    check_same_grid(a, b)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_COLUMNS)
    diffs = []
    for pa, pb in zip(a, b):
        try:
            kl = kl_commutative(pa.probabilities, pb.probabilities)
        except SupportMismatch:
            kl = math.inf
        diff = pa.mi_bits - pb.mi_bits
        diffs.append(diff)
        w.writerow([fmt(pa.sigma), fmt(pa.mi_bits), fmt(pb.mi_bits), fmt(diff),
                    fmt(kl) if math.isfinite(kl) else "inf"])
    k = int(np.argmax(np.abs(diffs)))
    summary = {"curve_difference_energy": curve_difference_energy(a, b),
               "max_abs_mi_diff": abs(diffs[k]), "sigma_at_max": a.points[k].sigma}
    line = " ".join(f"{key}={fmt(val)}" for key, val in summary.items())
    if args.out:
        _write_outputs(args, buf.getvalue(), None, {**_config(args), "summary": summary})
        print(line)
    else:
        sys.stdout.write(buf.getvalue())
        print(f"# {line}")


# ---------------------------------------------------------------- parser

def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("constellation")
    g.add_argument("--family", choices=[f.value for f in Family if f is not Family.CUSTOM])
    g.add_argument("--size", type=int)
    g.add_argument("--constellation-file", help="JSON with dimension/points/probabilities")
    g.add_argument("--raw", action="store_true",
                   help="keep the integer-lattice coordinates (no unit-energy scaling)")
    g = p.add_argument_group("noise grid")
    g.add_argument("--sigma", help="start:stop:step, a,b,c or a single value")
    g.add_argument("--snr-db", help="SNR grid in dB, converted with the input power")
    g = p.add_argument_group("quantizer")
    g.add_argument("--bits", type=int, default=None, help="bits per dimension")
    g.add_argument("--shift-mult", type=float, default=2.0, help="grid shift in units of sigma")
    g.add_argument("--grid-layout", choices=["centered", "half-open"], default="centered")
    p.add_argument("--out", help="output prefix; writes PREFIX.csv/.jsonl/.json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="awgnshape", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi-curve", help="MI of a fixed distribution over sigma or SNR")
    _add_common(p)
    p.add_argument("--estimator", choices=["mc", "discrete"], default="discrete")
    p.add_argument("--distribution", default="uniform",
                   help="uniform | mb:LAMBDA | file (from --constellation-file) | path to JSON")
    p.add_argument("--unit-energy", action="store_true",
                   help="rescale to unit power under the chosen distribution")
    p.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo noise samples")
    p.add_argument("--seed", type=int, default=0, help="base seed; point k uses seed + k")
    p.set_defaults(func=cmd_mi_curve)

    p = sub.add_parser("optimize", help="optimised input distributions per sigma")
    p.add_argument("method", choices=["mb-envelope", "ba", "cba"])
    _add_common(p)
    p.add_argument("--lambdas", default="0:10:0.5",
                   help="MB lambda grid, or negative[:COUNT] for 1 - exp(v), v in [0, 4.5]")
    p.add_argument("--no-unit-energy", action="store_true",
                   help="mb-envelope: keep the constellation fixed instead of rescaling")
    p.add_argument("--eps", type=float, default=1e-7, help="BA stopping threshold (bits)")
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--alpha-range", default="0.5:4")
    p.add_argument("--points-per-depth", type=int, default=50)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--inner-eps", type=float, default=1e-7)
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--keep-infeasible-gains", action="store_true",
                   help="do not skip gains without a Lagrange multiplier (diagnostic)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("compare", help="compare two .jsonl results on the same sigma grid")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NUMERICAL_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ShapingError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
