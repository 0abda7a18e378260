"""Command-line interface.

Usage examples::

    cvmac threshold --scheme a --n1 1000
    cvmac threshold --scheme b --n 100
    cvmac point --scheme b --n 100 --nprime 6
    cvmac ratio-surface --scheme a --axis1 n1:10:2000:50:log --axis2 n2:0.1:10:50:log --out a.csv
    cvmac ratio-surface --scheme b --n 100 --axis2 nprime:0.05:6:60:linear --out b_cut.csv
    cvmac classical-region --p1 1 --p2 1 --noise 1
    cvmac selfcheck --density 10

Exit codes: 0 ok, 1 self-check failure, 2 usage, 3 I/O, 4 no threshold,
5 operating point outside the supported regime.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import capacity as cap
from .classical import ClassicalMacSpec, classical_region, local_rate_rule_holds
from .selfcheck import run_all

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NO_THRESHOLD = 4
EXIT_OUT_OF_REGIME = 5

CSV_HEADER = ["axis1", "axis2", "i_ent", "bound", "ratio", "superadditive"]
AXIS_NAMES = {"a": ("n1", "n2"), "b": ("n", "nprime")}
DEFAULT_AXES = {
    "a": ("n1:10:2000:50:log", "n2:0.1:10:50:log"),
    "b": ("n:10:500:50:log", "nprime:0.05:6:50:log"),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.scale not in ("linear", "log"):
            raise UsageError(f"axis scale must be linear or log, got {self.scale!r}")
        degenerate = self.steps == 1 and self.min == self.max
        if not degenerate:
            if self.steps < 2:
                raise UsageError(f"axis {self.name}: steps must be >= 2")
            if not self.min < self.max:
                raise UsageError(f"axis {self.name}: min must be below max")
        if self.min < 0 or (self.scale == "log" and self.min <= 0):
            raise UsageError(f"axis {self.name}: invalid lower limit {self.min}")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise UsageError(f"axis spec {text!r} is not name:min:max:steps[:scale]")
        try:
            lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise UsageError(f"axis spec {text!r}: {exc}") from None
        if steps < 2:
            raise UsageError(f"axis {parts[0]}: steps must be >= 2")
        return cls(parts[0], lo, hi, steps, parts[4] if len(parts) == 5 else "linear")

    @classmethod
    def fixed(cls, name: str, value: float) -> "Axis":
        return cls(name, value, value, 1, "linear")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.min])
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.steps)
        return np.linspace(self.min, self.max, self.steps)

    def describe(self) -> dict:
        return {"name": self.name, "min": self.min, "max": self.max,
                "steps": self.steps, "scale": self.scale}


@dataclass
class SweepGrid:
    scheme: str
    axis1: Axis
    axis2: Axis
    cells: list = field(default_factory=list)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    out: Path | None = None
    format: str = "json"
    tol: float = 1e-6

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _constraints(scheme: str, first: float, second: float) -> cap.PowerConstraints:
    if scheme == "a":
        return cap.ConstraintsA(first, second)
    return cap.ConstraintsB(first, second)


def rate_point(scheme: str, first: float, second: float) -> cap.RatePoint:
    c = _constraints(scheme, first, second)
    return cap.enhancement_ratio_a(c) if scheme == "a" else cap.enhancement_ratio_b(c)


def _cell(args):
    return rate_point(*args)


def evaluate_grid(scheme: str, axis1: Axis, axis2: Axis, jobs: int = 1) -> SweepGrid:
    """Evaluate every (axis1, axis2) cell; cells are stored in row-major order."""
    tasks = [(scheme, float(u), float(v)) for u in axis1.values() for v in axis2.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_cell, tasks, chunksize=64))
    else:
        cells = [_cell(t) for t in tasks]
    return SweepGrid(scheme, axis1, axis2, cells)


def _point_axes(point: cap.RatePoint) -> tuple[float, float]:
    c = point.constraints
    return (c.n1, c.n2) if isinstance(c, cap.ConstraintsA) else (c.n, c.n_prime)


def grid_to_csv(grid: SweepGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in grid.cells:
        a1, a2 = _point_axes(p)
        writer.writerow(
            [format(v, ".17g") for v in (a1, a2, p.i_ent, p.bound_prod, p.ratio)]
            + ["true" if p.superadditive else "false"]
        )
    return buf.getvalue()


def grid_to_json(grid: SweepGrid) -> str:
    rows = []
    for p in grid.cells:
        a1, a2 = _point_axes(p)
        rows.append(dict(zip(CSV_HEADER, (a1, a2, p.i_ent, p.bound_prod, p.ratio, p.superadditive))))
    doc = {"scheme": grid.scheme, "axis1": grid.axis1.describe(),
           "axis2": grid.axis2.describe(), "cells": rows}
    return json.dumps(doc, indent=2) + "\n"


def read_csv_rows(text: str) -> list[dict]:
    """Parse a ratio-surface CSV back into typed rows."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {k: float(rec[k]) for k in CSV_HEADER[:-1]}
        row["superadditive"] = rec["superadditive"] == "true"
        rows.append(row)
    return rows


def _round6(obj):
    if isinstance(obj, float):
        return float(format(obj, ".6g")) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round6(v) for v in obj]
    return obj


def _dump(doc: dict) -> str:
    return json.dumps(_round6(doc), indent=2) + "\n"


def _emit(text: str, out: Path | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _squeezing_report(point: cap.RatePoint) -> dict:
    aux = point.auxiliary
    report = {"two_mode_db": cap.db_from_r(aux["r"])}
    if "R" in aux:
        report["one_mode_db"] = cap.db_from_r(aux["R"])
        report["photons_per_line"] = math.sinh(aux["R"]) ** 2
    return report


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_ratio_surface(args) -> int:
    scheme = args.scheme
    names = AXIS_NAMES[scheme]
    fixed = (args.n1, args.n2) if scheme == "a" else (args.n, args.nprime)
    specs = [args.axis1, args.axis2]
    axes = []
    for k in range(2):
        if specs[k] is not None:
            ax = Axis.parse(specs[k])
        elif fixed[k] is not None:
            ax = Axis.fixed(names[k], fixed[k])
        else:
            ax = Axis.parse(DEFAULT_AXES[scheme][k])
        if ax.name != names[k]:
            raise UsageError(f"axis{k + 1} for scheme {scheme} must be {names[k]!r}, got {ax.name!r}")
        axes.append(ax)
    config = RunConfig("ratio-surface", {"scheme": scheme}, args.out, args.format or "csv")
    grid = evaluate_grid(scheme, axes[0], axes[1], jobs=args.jobs)
    text = grid_to_csv(grid) if config.format == "csv" else grid_to_json(grid)
    return _emit(text, config.out)


def threshold_report(scheme: str, fixed: float, tol: float = 1e-6) -> dict | None:
    """Threshold, its squeezing in dB and the achieving parameters; None if no crossing."""
    if scheme == "a":
        star = cap.threshold_a(fixed, tol=tol)
    else:
        star = cap.threshold_b(fixed, tol=tol)
    if star is None:
        return None
    point = rate_point(scheme, fixed, star)
    params = dict(point.auxiliary)
    params.update(_squeezing_report(point))
    params["ratio"] = point.ratio
    return {
        "scheme": scheme,
        "fixed": {("n1" if scheme == "a" else "n"): fixed},
        "threshold": star,
        "squeezing_db": cap.db_from_r(cap.r_from_photons(star)),
        "achieving_params": params,
    }


def cmd_threshold(args) -> int:
    if args.scheme == "a":
        _require(args, "n1")
        fixed = args.n1
    else:
        _require(args, "n")
        fixed = args.n
    config = RunConfig("threshold", {"fixed": fixed}, args.out, args.format or "json", args.tol)
    if config.format != "json":
        raise UsageError("threshold output is JSON only")
    report = threshold_report(args.scheme, fixed, config.tol)
    if report is None:
        print(f"no superadditivity threshold found for scheme {args.scheme} at {fixed}",
              file=sys.stderr)
        return EXIT_NO_THRESHOLD
    return _emit(_dump(report), config.out)


def point_report(scheme: str, first: float, second: float, theta: float | None = None,
                 noise: float = 1.0) -> dict:
    """Single-point rates, product bound, squeezing figures and classical comparison.

    Raises:
        OutOfRegimeError: scheme A with ``cos^2 theta > n2/(n2+1)``.
    """
    point = rate_point(scheme, first, second)
    doc = {
        "scheme": scheme,
        "constraints": dict(zip(AXIS_NAMES[scheme], (first, second))),
        "i_ent": point.i_ent,
        "bound": point.bound_prod,
        "ratio": point.ratio,
        "superadditive": point.superadditive,
        "achieving_params": dict(point.auxiliary),
        "squeezing": _squeezing_report(point),
    }
    if scheme == "a" and theta is not None:
        c = cap.ConstraintsA(first, second)
        i_ent, params = cap.i_max_ent_a(c, theta=theta)
        n_theta = cap.n_max_a(theta, c)
        doc["at_theta"] = {"theta": theta, "i_ent": i_ent, "r": params["r"],
                           "n_max": n_theta, "bound": cap.product_bound(n_theta)}
    # first sender's budget vs the second sender's total photon budget
    p1, p2 = first, 2.0 * second
    base = ClassicalMacSpec(p1, 0.0, noise)
    aug = ClassicalMacSpec(p1, p2, noise)
    region = classical_region(aug)
    doc["classical_baseline"] = {
        "p1": p1, "p2": p2, "noise": noise,
        "r1_max": region.r1_max, "r2_max": region.r2_max, "rsum_max": region.rsum_max,
        "local_rate_rule_holds": local_rate_rule_holds(base, aug),
        "quantum_violation": point.superadditive,
    }
    return doc


def cmd_point(args) -> int:
    if args.scheme == "a":
        _require(args, "n1", "n2")
        first, second = args.n1, args.n2
    else:
        _require(args, "n", "nprime")
        first, second = args.n, args.nprime
    try:
        doc = point_report(args.scheme, first, second, theta=args.theta, noise=args.noise)
    except cap.OutOfRegimeError as exc:
        err = {"error": "out_of_regime", "message": str(exc),
               "supported": "cos^2(theta) <= n2/(n2+1)"}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_OUT_OF_REGIME
    return _emit(_dump(doc), args.out)


def classical_report(p1: float, p2: float, noise: float, p2_augmented: float,
                     n1: float, n2: float) -> dict:
    spec = ClassicalMacSpec(p1, p2, noise)
    aug = ClassicalMacSpec(p1, p2_augmented, noise)
    region = classical_region(spec)
    quantum = cap.enhancement_ratio_a(cap.ConstraintsA(n1, n2))
    return {
        "p1": p1, "p2": p2, "noise": noise,
        "r1_max": region.r1_max, "r2_max": region.r2_max, "rsum_max": region.rsum_max,
        "p2_augmented": p2_augmented,
        "r1_max_augmented": classical_region(aug).r1_max,
        "local_rate_rule_holds": local_rate_rule_holds(spec, aug),
        "quantum_contrast": {
            "scheme": "a", "n1": n1, "n2": n2, "ratio": quantum.ratio,
            "superadditive": quantum.superadditive,
            "local_rate_rule_violated": quantum.superadditive,
        },
    }


def cmd_classical_region(args) -> int:
    doc = classical_report(args.p1, args.p2, args.noise, args.p2_augmented, args.n1, args.n2)
    return _emit(_dump(doc), args.out)


def cmd_selfcheck(args) -> int:
    if args.density < 2:
        raise UsageError("--density must be >= 2")
    results = run_all(args.density, args.cases, args.seed,
                      mirror_kept_port=args.corrupt_bs_sign)
    lines = [f"{r.name:22s} max_residual={r.max_residual:.3e} tol={r.tolerance:.0e} "
             f"cases={r.cases} {'PASS' if r.passed else 'FAIL'}" for r in results]
    code = _emit("\n".join(lines) + "\n", args.out)
    if code:
        return code
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvmac",
        description="Superadditivity of Gaussian multiple-access channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme=True):
        if scheme:
            p.add_argument("--scheme", choices=("a", "b"), type=str.lower, required=True)
            p.add_argument("--n1", type=float, help="scheme A carrier photon budget")
            p.add_argument("--n2", type=float, help="scheme A squeezing photons per mode")
            p.add_argument("--n", type=float, help="scheme B upper-sender photon budget")
            p.add_argument("--nprime", type=float, help="scheme B squeezing photons per mode")
        p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--tol", type=float, default=1e-6, help="root-finding tolerance")

    p = sub.add_parser("ratio-surface", help="grid of enhancement ratios")
    common(p)
    p.add_argument("--axis1", help="name:min:max:steps:scale (n1 or n)")
    p.add_argument("--axis2", help="name:min:max:steps:scale (n2 or nprime)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_ratio_surface)

    p = sub.add_parser("threshold", help="smallest squeezing budget giving superadditivity")
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("point", help="single-point report")
    common(p)
    p.add_argument("--theta", type=float, default=None,
                   help="scheme A beam-splitter angle (default: regime angle)")
    p.add_argument("--noise", type=float, default=1.0,
                   help="noise variance for the classical comparison")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("classical-region", help="classical Gaussian MAC rate region")
    common(p, scheme=False)
    p.add_argument("--p1", type=float, default=1.0)
    p.add_argument("--p2", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--p2-augmented", type=float, default=100.0,
                   help="sender-2 power for the local-rate-rule check")
    p.add_argument("--n1", type=float, default=1000.0, help="quantum contrast, scheme A")
    p.add_argument("--n2", type=float, default=3.0, help="quantum contrast, scheme A")
    p.set_defaults(func=cmd_classical_region)

    p = sub.add_parser("selfcheck", help="oracle-equivalence and invariant suites")
    common(p, scheme=False)
    p.add_argument("--density", type=int, default=10)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--corrupt-bs-sign", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
