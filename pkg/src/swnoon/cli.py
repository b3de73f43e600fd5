"""Command-line driver.

Subcommands: ``generate`` (run the preparation sequence and report the
final state), ``fringe`` (scan the interferometer over displacements),
``error-sweep`` (error budget over orders, shifts, lifetimes),
``estimate`` (fit a displacement from measured counts), ``feasibility``
(assess an ensemble geometry).  Exit status 0 on success, 2 on usage or
configuration errors, 1 on runtime failures; diagnostics are single
lines on stderr.  CSV output is UTF-8 with LF newlines and 12
significant digits, and identical configuration plus seed produces
byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .budget import sweep_error_vs_shift
from .collective import StateError
from .config import ConfigError, RunConfig, apply_values, parse_config_file
from .feasibility import EnsembleSpec, feasibility_report
from .fringe import (
    EstimationError,
    estimate_displacement,
    expected_fringe_probability,
    fringe_scan,
    simulate_counts,
)
from .ode import IntegrationError
from .protocol import (
    ProtocolError,
    build_generation_sequence,
    generate_noon,
    noon_state,
)

__all__ = ["main"]

ESTIMATE_HEADER = "displacement_um,shots,count"
SWEEP_HEADER = "order,lifetime_us,delta_e_mhz,p_success,e_total"

_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot the protocol error versus blockade shift from a sweep CSV."""
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = __CSV_PATH__
OUT_PATH = __PNG_PATH__

series = defaultdict(list)
with open(CSV_PATH, encoding="utf-8") as fh:
    for row in csv.DictReader(fh):
        key = (int(row["order"]), float(row["lifetime_us"]))
        series[key].append((float(row["delta_e_mhz"]), float(row["e_total"])))

lifetimes = sorted({tau for _, tau in series})
dashes = ["-", "--", ":", "-."]
fig, ax = plt.subplots(figsize=(5.0, 3.6))
for (order, tau), points in sorted(series.items()):
    points.sort()
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    style = dashes[lifetimes.index(tau) % len(dashes)]
    ax.plot(xs, ys, style, marker="o", ms=3,
            label="order %d, lifetime %g us" % (order, tau))
ax.set_xlabel("blockade shift (MHz)")
ax.set_ylabel("protocol error")
ax.set_yscale("log")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT_PATH, dpi=200)
print("wrote " + OUT_PATH)
'''


def _fmt(value: float) -> str:
    return f"{value:.11e}"


def _vec3_arg(raw: str) -> Tuple[float, float, float]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected X,Y,Z with three components, got {raw!r}"
        )
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return (x, y, z)


def _scan_arg(raw: str) -> Tuple[float, float, int]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected MIN,MAX,STEPS, got {raw!r}"
        )
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if steps < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 steps, got {steps}")
    if not lo <= hi:
        raise argparse.ArgumentTypeError(f"scan range is empty: {lo} > {hi}")
    return (lo, hi, steps)


def _int_list_arg(raw: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(p) for p in raw.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return values


def _float_list_arg(raw: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(p) for p in raw.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return values


def _unit_axis(vec: Tuple[float, float, float]) -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ConfigError("direction must be a nonzero vector")
    return arr / norm


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    if config_path is not None:
        cfg = apply_values(cfg, parse_config_file(config_path))
    overrides = {}
    for field in ("seed", "out", "order", "shots", "atom_count", "lifetime_us"):
        value = getattr(args, field, None)
        if value is not None:
            overrides[field] = value
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def cmd_generate(cfg: RunConfig, args: argparse.Namespace) -> int:
    pulses = build_generation_sequence(cfg.order)
    if args.pulses:
        print(len(pulses))
        return 0
    state = generate_noon(cfg.order)
    overlap = abs(state.overlap(noon_state(cfg.order)))
    beams = np.asarray(cfg.geometry().beam_matrix())
    branches = sorted(state.items(), key=lambda kv: (kv[0].occupation, kv[0].k_coeffs))

    print(f"order = {cfg.order}")
    print(f"pulses = {len(pulses)}")
    print(f"branches = {len(branches)}")
    print("occ_sa occ_sb occ_ra occ_rb | k_total (rad/um) | amplitude | weight")
    csv_lines = ["occ_sa,occ_sb,occ_ra,occ_rb,k_x,k_y,k_z,amp_re,amp_im,weight"]
    for config, amp in branches:
        k_num = np.asarray(config.total_k(), dtype=float) @ beams
        occ = " ".join(str(n) for n in config.occupation)
        kxyz = ", ".join(_fmt(c) for c in k_num)
        weight = abs(amp) ** 2
        print(
            f"{occ} | ({kxyz}) | "
            f"({_fmt(amp.real)}, {_fmt(amp.imag)}) | {_fmt(weight)}"
        )
        csv_lines.append(
            ",".join(
                [
                    *(str(n) for n in config.occupation),
                    *(_fmt(c) for c in k_num),
                    _fmt(amp.real),
                    _fmt(amp.imag),
                    _fmt(weight),
                ]
            )
        )
    print(f"noon_overlap_magnitude = {_fmt(overlap)}")
    if cfg.out is not None:
        _write_text(cfg.out, "\n".join(csv_lines) + "\n")
    return 0


def cmd_fringe(cfg: RunConfig, args: argparse.Namespace) -> int:
    lo, hi, steps = args.scan
    axis = _unit_axis(args.direction)
    geometry = cfg.geometry()
    kproj = float(np.asarray(geometry.fringe_k(), dtype=float) @ axis)
    xs = np.linspace(lo, hi, steps)
    results = fringe_scan(cfg.order, tuple(axis), xs, geometry)

    with_counts = cfg.shots > 0
    header = (
        "displacement_um,probability,counts,expected_sin2"
        if with_counts
        else "displacement_um,probability,expected_sin2"
    )
    lines = [header]
    for i, res in enumerate(results):
        expected = expected_fringe_probability(cfg.order, kproj, res.displacement_um)
        fields = [_fmt(res.displacement_um), _fmt(res.probability)]
        if with_counts:
            fields.append(str(simulate_counts(res.probability, cfg.shots, cfg.seed + i)))
        fields.append(_fmt(expected))
        lines.append(",".join(fields))
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def _plot_script_path(out_path: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return f"{stem}_plot.py"


def cmd_error_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    orders = args.orders if args.orders is not None else (cfg.order,)
    shifts = (
        args.delta_e_mhz if args.delta_e_mhz is not None else (cfg.energy_shift_mhz,)
    )
    lifetimes = (
        args.lifetimes_us if args.lifetimes_us is not None else (cfg.lifetime_us,)
    )
    for order in orders:
        if order < 1:
            raise ConfigError(f"order must be >= 1, got {order}")
    for shift in shifts:
        if not shift > 0.0:
            raise ConfigError(f"energy shift must be positive, got {shift}")
    for lifetime in lifetimes:
        if not lifetime > 0.0:
            raise ConfigError(f"lifetime must be positive, got {lifetime}")

    rows = sweep_error_vs_shift(orders, shifts, lifetimes, n_atoms=cfg.atom_count)
    lines = [SWEEP_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row.order),
                    _fmt(row.lifetime_us),
                    _fmt(row.blockade_shift_mhz),
                    _fmt(row.p_success),
                    _fmt(row.e_total),
                ]
            )
        )
    _write_text(cfg.out, "\n".join(lines) + "\n")
    if cfg.out is not None:
        script_path = _plot_script_path(cfg.out)
        script = _PLOT_TEMPLATE.replace("__CSV_PATH__", repr(cfg.out)).replace(
            "__PNG_PATH__", repr(cfg.out + ".png")
        )
        _write_text(script_path, script)
    return 0


def _read_counts_csv(path: str) -> List[Tuple[float, int, int]]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read counts file {path!r}: {exc}") from exc
    if not lines:
        raise ConfigError(f"{path}:1: missing header {ESTIMATE_HEADER!r}")
    if lines[0].strip().lstrip("﻿") != ESTIMATE_HEADER:
        raise ConfigError(
            f"{path}:1: expected header {ESTIMATE_HEADER!r}, got {lines[0]!r}"
        )
    samples: List[Tuple[float, int, int]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ConfigError(
                f"{path}:{lineno}: expected 3 comma-separated fields, got {line!r}"
            )
        try:
            setting = float(parts[0])
            shots = int(parts[1])
            count = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        samples.append((setting, shots, count))
    if not samples:
        raise ConfigError(f"{path}: no data rows")
    return samples


def cmd_estimate(cfg: RunConfig, args: argparse.Namespace) -> int:
    samples = _read_counts_csv(args.counts)
    axis = _unit_axis(args.direction)
    kproj = float(np.asarray(cfg.geometry().fringe_k(), dtype=float) @ axis)
    if kproj == 0.0:
        raise ConfigError(
            "scan direction is orthogonal to the fringe wave vector"
        )
    result = estimate_displacement(samples, cfg.order, kproj)
    if result.ambiguous:
        print(
            "warning: settings span one fringe period or more; "
            "the estimate is aliased",
            file=sys.stderr,
        )
    print(f"estimate_um = {_fmt(result.estimate_um)} +/- {_fmt(result.stderr_um)}")
    print(f"period_um = {_fmt(result.period_um)}")
    return 0


def cmd_feasibility(cfg: RunConfig, args: argparse.Namespace) -> int:
    spec = EnsembleSpec(
        principal_n=args.principal_n,
        radius_um=args.radius_um,
        density_per_cm3=args.density_per_cm3,
    )
    report = feasibility_report(
        spec,
        order=cfg.order,
        lifetime_us=cfg.lifetime_us,
        target_shift_mhz=args.target_shift_mhz,
        target_error=args.target_error,
    )
    for message in report.warnings:
        print(f"warning: {message}", file=sys.stderr)
    print(f"principal_n = {spec.principal_n}")
    print(f"radius_um = {_fmt(spec.radius_um)}")
    print(f"density_per_cm3 = {_fmt(spec.density_per_cm3)}")
    print(f"min_pair_shift_mhz = {_fmt(report.shift_mhz)}")
    print(f"shift_sign = {report.shift_sign}")
    print(f"target_shift_mhz = {_fmt(report.target_shift_mhz)}")
    print(f"shift_ok = {report.shift_ok}")
    print(f"atom_number = {_fmt(report.n_atoms)}")
    print(f"order = {report.order}")
    print(f"lifetime_us = {_fmt(report.lifetime_us)}")
    print(f"p_success = {_fmt(report.p_success)}")
    print(f"e_protocol = {_fmt(report.e_protocol)}")
    print(f"target_error = {_fmt(report.target_error)}")
    print(f"error_ok = {report.error_ok}")
    print(f"e_atom_number = {_fmt(report.e_atom_number)}")
    print(f"fidelity = {_fmt(report.fidelity)}")
    print("PASS" if report.feasible else "FAIL")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", metavar="PATH", default=argparse.SUPPRESS,
        help="flat key=value config file",
    )
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS,
        help="random seed for simulated counts",
    )
    common.add_argument(
        "--out", metavar="PATH", default=argparse.SUPPRESS,
        help="output file (default: stdout)",
    )

    parser = argparse.ArgumentParser(
        prog="swnoon",
        description="Spin-wave NOON interferometer: simulation and error budget.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    g = sub.add_parser(
        "generate", parents=[common],
        help="run the state-preparation sequence and report the final state",
    )
    g.add_argument("--order", type=int, help="number of stored excitations")
    g.add_argument("--pulses", action="store_true", help="print only the pulse count")
    g.set_defaults(handler=cmd_generate)

    f = sub.add_parser(
        "fringe", parents=[common],
        help="scan the interferometer over displacements",
    )
    f.add_argument("--order", type=int, help="number of stored excitations")
    f.add_argument("--shots", type=int, help="ionization shots per point (0: none)")
    f.add_argument(
        "--scan", type=_scan_arg, required=True, metavar="MIN,MAX,STEPS",
        help="displacement range in um and number of points",
    )
    f.add_argument(
        "--direction", type=_vec3_arg, default=(1.0, 0.0, 0.0), metavar="X,Y,Z",
        help="scan direction (normalized internally; default 1,0,0)",
    )
    f.set_defaults(handler=cmd_fringe)

    e = sub.add_parser(
        "error-sweep", parents=[common],
        help="error budget over orders, blockade shifts, and lifetimes",
    )
    e.add_argument("--orders", type=_int_list_arg, metavar="L1,L2,...")
    e.add_argument("--delta-e-mhz", type=_float_list_arg, metavar="D1,D2,...")
    e.add_argument("--lifetimes-us", type=_float_list_arg, metavar="T1,T2,...")
    e.add_argument("--atom-count", type=float, help="ensemble size")
    e.set_defaults(handler=cmd_error_sweep)

    s = sub.add_parser(
        "estimate", parents=[common],
        help="fit a displacement from a counts CSV",
    )
    s.add_argument("--order", type=int, help="number of stored excitations")
    s.add_argument(
        "--counts", required=True, metavar="PATH",
        help=f"CSV with header {ESTIMATE_HEADER!r}",
    )
    s.add_argument(
        "--direction", type=_vec3_arg, default=(1.0, 0.0, 0.0), metavar="X,Y,Z",
        help="scan direction the settings were taken along",
    )
    s.set_defaults(handler=cmd_estimate)

    y = sub.add_parser(
        "feasibility", parents=[common],
        help="assess an ensemble geometry against shift and error targets",
    )
    y.add_argument("--order", type=int, help="number of stored excitations")
    y.add_argument("--lifetime-us", type=float, help="Rydberg lifetime")
    y.add_argument("--principal-n", type=int, default=100)
    y.add_argument("--radius-um", type=float, default=3.8)
    y.add_argument("--density-per-cm3", type=float, default=1.7e12)
    y.add_argument("--target-shift-mhz", type=float, default=300.0)
    y.add_argument("--target-error", type=float, default=0.05)
    y.set_defaults(handler=cmd_feasibility)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        return args.handler(cfg, args)
    except (IntegrationError, EstimationError, StateError, ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
