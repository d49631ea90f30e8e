"""Command-line front-end: polarizability sweeps, magic-wavelength search,
transition-shift scans, mode profiles, and trap profiles, as CSV or JSON.

Output is deterministic for a fixed configuration: no timestamps, stable
column order, metadata comment lines suppressible with ``--no-meta``.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .atomdata import DataFileError, default_database_path, load_database
from .constants import wavelength_to_omega
from .fibermode import (
    CutoffError,
    FiberSpec,
    field_envelope,
    normalize_power,
    solve_fundamental_mode,
)
from .magic import central_magic, cluster_crossings, find_crossings
from .polarizability import (
    NoCouplingsError,
    scalar_polarizability,
    tensor_polarizability,
)
from .stark import FieldEnvelope, transition_shifts
from .trap import BeamConfig, characterize, default_grid, two_color_profile
from .wigner import HalfInt

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, its parameters, and output options."""

    command: str
    params: dict
    output: str          # "csv" or "json"
    data_path: str
    no_meta: bool


def _fmt(x):
    return format(float(x), ".10g")


def _parse_range(text, flag):
    """start:stop[:step] in nm -> inclusive numpy array; bare number -> [x]."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 2:
            lo, hi = float(parts[0]), float(parts[1])
            return np.array([lo, hi])
        if len(parts) == 3:
            lo, hi, step = (float(p) for p in parts)
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(round((hi - lo) / step))
            grid = lo + step * np.arange(n + 1)
            if grid[-1] < hi - 1e-9 * step:
                grid = np.append(grid, hi)
            grid[-1] = min(grid[-1], hi)
            return grid
    except ValueError:
        pass
    raise _UsageError(f"{flag}: expected number or start:stop[:step], got {text!r}")


class _UsageError(Exception):
    pass


def _load_db(args):
    path = args.data or os.environ.get("NANOTRAP_DATA") or default_database_path()
    return load_database(path)


def _emit_meta(out, pairs, no_meta):
    if no_meta:
        return
    for key, value in pairs:
        out.write(f"# {key}={value}\n")


def _emit_csv(out, header, rows):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(x) for x in row) + "\n")


def _label(f, mf):
    sign = "m" if mf.twice < 0 else ""
    return f"F{f}_M{sign}{abs(mf.twice) // 2 if mf.twice % 2 == 0 else str(abs(mf.twice)) + 'o2'}"


def _cmd_polarizability(args, out):
    db = _load_db(args)
    lam_nm = _parse_range(args.lambda_nm, "--lambda-nm")
    state = db.state(args.state)
    omega = wavelength_to_omega(lam_nm * 1e-9)
    a0 = scalar_polarizability(state, omega, db)
    a2 = tensor_polarizability(state, omega, db)
    a0 = np.broadcast_to(np.asarray(a0, dtype=float), lam_nm.shape)
    a2 = np.broadcast_to(np.asarray(a2, dtype=float), lam_nm.shape)
    if args.format == "json":
        payload = {
            "state": state.label,
            "lambda_nm": [float(x) for x in lam_nm],
            "alpha0_au": [float(x) for x in a0],
            "alpha2_au": [float(x) for x in a2],
        }
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    _emit_meta(out, [("command", "polarizability"), ("state", state.label)],
               args.no_meta)
    _emit_csv(out, ["lambda_nm", "alpha0_au", "alpha2_au"],
              zip(lam_nm, a0, a2))


def _cmd_magic(args, out):
    db = _load_db(args)
    window_nm = _parse_range(args.window_nm, "--window-nm")
    if len(window_nm) < 2:
        raise _UsageError("--window-nm: expected start:stop")
    window = (window_nm[0] * 1e-9, window_nm[-1] * 1e-9)
    crossings = find_crossings(args.upper, args.lower, window, db)
    clusters = cluster_crossings(crossings)
    cluster_payload = []
    for cluster in clusters:
        entry = {
            "wavelengths_nm": [c.wavelength_nm for c in cluster],
            "branches": [c.branch for c in cluster],
        }
        if len(cluster) == 2 and {c.branch for c in cluster} == {"sum", "difference"}:
            entry["central_nm"] = central_magic(cluster) * 1e9
        cluster_payload.append(entry)
    payload = {
        "upper": args.upper,
        "lower": args.lower,
        "window_nm": [float(window_nm[0]), float(window_nm[-1])],
        "crossings": [
            {
                "lambda_nm": c.wavelength_nm,
                "branch": c.branch,
                "slope_sign": "+" if c.slope_sign > 0 else "-",
                "detuning_side": c.detuning_side,
                "delta_alpha_au": c.delta_alpha,
            }
            for c in crossings
        ],
        "clusters": cluster_payload,
    }
    if args.format == "csv":
        _emit_meta(out, [("command", "magic"), ("upper", args.upper),
                         ("lower", args.lower)], args.no_meta)
        _emit_csv(
            out,
            ["lambda_nm", "branch", "slope_sign", "delta_alpha_au"],
            [],
        )
        for c in crossings:
            out.write(
                f"{_fmt(c.wavelength_nm)},{c.branch},"
                f"{'+' if c.slope_sign > 0 else '-'},{_fmt(c.delta_alpha)}\n"
            )
        return
    json.dump(payload, out, indent=2)
    out.write("\n")


def _cmd_shift(args, out):
    db = _load_db(args)
    lam_nm = _parse_range(args.lambda_nm, "--lambda-nm")
    intensity = _parse_range(args.intensity_mw_cm2, "--intensity-mw-cm2")
    if len(lam_nm) > 1 and len(intensity) > 1:
        raise _UsageError(
            "sweep either --lambda-nm or --intensity-mw-cm2, not both"
        )
    upper = db.manifold(args.upper)
    lower = db.manifold(args.lower)
    upper_f = HalfInt.of(args.upper_f) if args.upper_f is not None else None
    sweep_lambda = len(lam_nm) > 1 or len(intensity) == 1

    rows = []
    labels = None
    points = lam_nm if sweep_lambda else intensity
    for value in points:
        lam = value if sweep_lambda else lam_nm[0]
        inten = intensity[0] if sweep_lambda else value
        omega = wavelength_to_omega(lam * 1e-9)
        field = FieldEnvelope.linear_z_intensity(inten * 1e10, omega)
        shifts = transition_shifts(upper, lower, [field], db, upper_f=upper_f)
        if labels is None:
            labels = [(f, mf) for f, mf, _ in shifts]
        rows.append([lam, inten] + [s * 1e-6 for _, _, s in shifts])

    header = ["lambda_nm", "intensity_mw_cm2"] + [
        f"shift_mhz_{_label(f, mf)}" for f, mf in labels
    ]
    if args.format == "json":
        payload = {
            "upper": args.upper,
            "lower": args.lower,
            "columns": header,
            "rows": [[float(x) for x in row] for row in rows],
        }
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    _emit_meta(out, [("command", "shift"), ("upper", args.upper),
                     ("lower", args.lower),
                     ("polarization", "linear_z")], args.no_meta)
    _emit_csv(out, header, rows)


def _cmd_mode(args, out):
    db = None  # mode solving needs no atomic data
    spec = FiberSpec(
        radius=args.a_um * 1e-6,
        wavelength=args.lambda_nm * 1e-9,
        n_core=args.n1,
    )
    mode = solve_fundamental_mode(spec)
    mode = normalize_power(mode, args.power_mw * 1e-3)
    if args.r_um is not None:
        r_grid = _parse_range(args.r_um, "--r-um") * 1e-6
        if len(r_grid) == 2:
            r_grid = np.linspace(r_grid[0], r_grid[-1], 200)
    else:
        r_grid = np.linspace(1.001 * spec.radius, 3.0 * spec.radius, 200)
    rows = []
    for r in r_grid:
        env = field_envelope(mode, r)
        rows.append([
            r * 1e6, abs(env.e_minus1), abs(env.e_0), abs(env.e_plus1),
        ])
    meta = [
        ("command", "mode"),
        ("a_um", _fmt(spec.radius * 1e6)),
        ("lambda_nm", _fmt(spec.wavelength * 1e9)),
        ("n1", _fmt(spec.core_index)),
        ("power_mw", _fmt(args.power_mw)),
        ("beta_rad_per_m", _fmt(mode.beta)),
        ("q_rad_per_m", _fmt(mode.q)),
        ("h_rad_per_m", _fmt(mode.h)),
        ("s_parameter", _fmt(mode.s)),
        ("amplitude_v_per_m", _fmt(mode.amplitude)),
    ]
    if args.format == "json":
        payload = {key: value for key, value in meta[1:]}
        payload["columns"] = ["r_um", "abs_e_minus1", "abs_e_0", "abs_e_plus1"]
        payload["rows"] = [[float(x) for x in row] for row in rows]
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    _emit_meta(out, meta, args.no_meta)
    _emit_csv(out, ["r_um", "abs_e_minus1", "abs_e_0", "abs_e_plus1"], rows)


def _cmd_trap(args, out):
    db = _load_db(args)
    fiber = FiberSpec(
        radius=args.a_um * 1e-6,
        wavelength=args.red_nm * 1e-9,
        n_core=args.n1,
    )
    red = BeamConfig(args.red_nm * 1e-9, args.red_mw * 1e-3, "red")
    blue = BeamConfig(args.blue_nm * 1e-9, args.blue_mw * 1e-3, "blue")
    grid = default_grid(fiber.radius, n_points=args.points)
    profile = two_color_profile(fiber, red, blue, db, grid=grid)
    summary = characterize(profile)

    header = (
        ["r_um", "ground_mhz"]
        + [f"excited_mhz_{_label(f, mf)}" for f, mf in profile.labels]
        + [f"tshift_mhz_{_label(f, mf)}" for f, mf in profile.labels]
        + ["ground_mk"]
        + [f"excited_mk_{_label(f, mf)}" for f, mf in profile.labels]
    )
    rows = []
    for i, r in enumerate(profile.r):
        rows.append(
            [r * 1e6, profile.ground[i] * 1e-6]
            + [x * 1e-6 for x in profile.excited[i]]
            + [x * 1e-6 for x in profile.transition[i]]
            + [profile.ground_mk[i]]
            + [x for x in profile.excited_mk[i]]
        )
    meta = [
        ("command", "trap"),
        ("a_um", _fmt(args.a_um)),
        ("red_nm", _fmt(args.red_nm)),
        ("red_mw", _fmt(args.red_mw)),
        ("blue_nm", _fmt(args.blue_nm)),
        ("blue_mw", _fmt(args.blue_mw)),
        ("trapped", str(summary.trapped).lower()),
    ]
    if summary.trapped:
        meta += [
            ("r_min_um", _fmt(summary.r_min * 1e6)),
            ("depth_mhz", _fmt(summary.depth_hz * 1e-6)),
            ("depth_mk", _fmt(summary.depth_mk)),
            ("barrier_mhz", _fmt(summary.barrier_hz * 1e-6)),
        ]
    if args.format == "json":
        payload = {key: value for key, value in meta[1:]}
        payload["columns"] = header
        payload["rows"] = [[float(x) for x in row] for row in rows]
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    _emit_meta(out, meta, args.no_meta)
    _emit_csv(out, header, rows)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nanotrap",
        description="Cesium light shifts, magic wavelengths, and two-color "
                    "evanescent trap profiles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format):
        p.add_argument("--data", default=None,
                       help="atomic data file (default: $NANOTRAP_DATA or bundled)")
        p.add_argument("--format", choices=("csv", "json"),
                       default=default_format)
        p.add_argument("--no-meta", action="store_true",
                       help="suppress '#' metadata header lines")
        p.add_argument("--output", default=None,
                       help="write to file instead of stdout")

    p = sub.add_parser("polarizability",
                       help="alpha0/alpha2 sweep over wavelength")
    p.add_argument("--state", required=True)
    p.add_argument("--lambda-nm", required=True,
                   help="wavelength sweep start:stop:step (nm)")
    common(p, "csv")
    p.set_defaults(func=_cmd_polarizability)

    p = sub.add_parser("magic", help="magic-wavelength crossings in a window")
    p.add_argument("--upper", default="6P3/2")
    p.add_argument("--lower", default="6S1/2")
    p.add_argument("--window-nm", required=True, help="window start:stop (nm)")
    common(p, "json")
    p.set_defaults(func=_cmd_magic)

    p = sub.add_parser("shift",
                       help="transition light shifts for a z-linear field")
    p.add_argument("--upper", default="6P3/2")
    p.add_argument("--lower", default="6S1/2")
    p.add_argument("--lambda-nm", required=True,
                   help="wavelength (nm), single value or sweep")
    p.add_argument("--intensity-mw-cm2", default="1",
                   help="intensity (MW/cm^2), single value or sweep")
    p.add_argument("--upper-f", type=float, default=None,
                   help="restrict to one upper-F family (e.g. 5)")
    common(p, "csv")
    p.set_defaults(func=_cmd_shift)

    p = sub.add_parser("mode", help="fundamental-mode evanescent profile")
    p.add_argument("--a-um", type=float, required=True, help="core radius (um)")
    p.add_argument("--lambda-nm", type=float, required=True)
    p.add_argument("--n1", type=float, default=None,
                   help="override the silica Sellmeier core index")
    p.add_argument("--power-mw", type=float, default=1.0)
    p.add_argument("--r-um", default=None,
                   help="radial grid start:stop[:step] (um), default 1..3 a")
    common(p, "csv")
    p.set_defaults(func=_cmd_mode)

    p = sub.add_parser("trap", help="two-color trap potentials vs radius")
    p.add_argument("--a-um", type=float, required=True)
    p.add_argument("--red-nm", type=float, required=True)
    p.add_argument("--red-mw", type=float, required=True)
    p.add_argument("--blue-nm", type=float, required=True)
    p.add_argument("--blue-mw", type=float, required=True)
    p.add_argument("--n1", type=float, default=None)
    p.add_argument("--points", type=int, default=400)
    common(p, "csv")
    p.set_defaults(func=_cmd_trap)

    return parser


def run(config, argv=None):
    """Entry used by main(): executes a parsed RunConfig-equivalent
    namespace and returns the process exit code."""
    return main(argv)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.output is not None:
            with open(args.output, "w", encoding="utf-8", newline="\n") as out:
                args.func(args, out)
        else:
            args.func(args, sys.stdout)
    except _UsageError as exc:
        print(f"nanotrap {args.command}: {exc}", file=sys.stderr)
        return 2
    except (DataFileError, NoCouplingsError, CutoffError, KeyError,
            ValueError, RuntimeError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"nanotrap {args.command}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
