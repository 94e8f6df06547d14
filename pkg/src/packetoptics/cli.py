"""Command-line front end.

    packetoptics evolve    --config exp.json --out results/
    packetoptics propagate --config exp.json --override run.mode=exact
    packetoptics match     --config exp.json --tolerance 1e-9
    packetoptics pattern   --config exp.json
    packetoptics sweep     --config exp.json --param w --values 0.01,0.005,0.0025

Exit codes: 0 success (or match pass), 1 match verdict fail, 2 configuration
error, 3 numerical guard tripped.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import plotting
from .apertures import Kind, build, format_field_csv
from .config import ConfigError, ExperimentConfig, load_config, resolve
from .dispersion import spreading_coefficient, transit_time
from .errors import NumericalGuardError, PacketOpticsError
from .evolution import evolve_spectral
from .lattice import norm_squared
from .matching import DEFAULT_TOLERANCE, MatchReport, check_edges, match_fields
from .patterns import cos2_profile, extract_features, sinc2_profile
from .propagation import propagate_exact, propagate_fraunhofer, propagate_fresnel

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_GUARD = 0, 1, 2, 3

SWEEP_KEYS = {
    "a": "aperture.a",
    "d": "aperture.d",
    "w": "aperture.w",
    "sigma": "aperture.sigma",
    "z": "run.z",
    "k0": "dispersion.k0",
}
REPORT_FIELDS = list(MatchReport.__dataclass_fields__)
SWEEP_COLUMNS = ["parameter", "value"] + REPORT_FIELDS + ["fringe_spacing", "fringe_error"]


# -- output helpers ----------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{float(value):.17g}"


def _csv_text(config_json: str, columns: dict) -> str:
    names = list(columns)
    rows = zip(*columns.values())
    lines = [f"# config: {config_json}", ",".join(names)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


class Outputs:
    def __init__(self, out_dir, cfg: ExperimentConfig):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.prefix = cfg["output.prefix"]
        self.config_json = cfg.to_json()
        self.plot = cfg["output.plot"]
        self.written: list[Path] = []

    def path(self, name: str) -> Path:
        return self.dir / f"{self.prefix}{name}"

    def text(self, name: str, text: str) -> Path:
        p = self.path(name)
        p.write_text(text)
        self.written.append(p)
        return p

    def field(self, name, field):
        return self.text(name, format_field_csv(field, header=f"config: {self.config_json}"))

    def density(self, name, x, density):
        return self.text(name, _csv_text(self.config_json, {"x": x, "density": density}))

    def figure(self, name, fn, *args, **kwargs):
        if self.plot:
            self.written.append(fn(self.path(name), *args, config_json=self.config_json, **kwargs))


def _require(cfg, key, command):
    value = cfg[key]
    if value is None:
        raise ConfigError(key, f"required by '{command}'")
    return value


def _edge_guard(cfg, density, what):
    if cfg["run.edge_tol"] is not None:
        check_edges(density, cfg["run.edge_tol"], what)


def _reference_pattern(cfg, x, scale):
    """Closed-form far-field pattern for slit apertures, else None."""
    ap = cfg.aperture
    if scale <= 0:
        return None, None
    if ap.kind is Kind.RECT:
        return sinc2_profile(x, ap.a, scale), "sinc^2 far field"
    if ap.kind is Kind.DOUBLE_SLIT:
        return cos2_profile(x, ap.d, scale), "cos^2 point slits"
    return None, None


def _features_summary(cfg, density):
    feat = extract_features(density, cfg.lattice, min_height=cfg["run.fringe_min_height"])
    return {
        "fringe_spacing": feat.fringe_spacing,
        "central_peak_width": feat.central_peak_width,
        "maxima": len(feat.maxima),
        "minima": len(feat.minima),
    }


# -- commands ----------------------------------------------------------------


def cmd_evolve(cfg: ExperimentConfig, out: Outputs) -> int:
    t = _require(cfg, "run.t", "evolve")
    field0 = build(cfg.aperture, cfg.lattice)
    field = evolve_spectral(field0, cfg.dispersion, t)
    _edge_guard(cfg, field.density, "evolved density")
    n0 = norm_squared(field0)
    drift = abs(norm_squared(field) - n0) / n0
    out.field("evolve_field.csv", field)
    out.density("evolve_density.csv", cfg.lattice.x, field.density)
    ref, label = _reference_pattern(cfg, cfg.lattice.x, spreading_coefficient(cfg.dispersion) * t)
    out.figure(
        "evolve.png", plotting.plot_evolution, cfg.lattice.x, field0.density, field.density,
        reference=ref, reference_label=label, title=f"t = {t:g}",
    )
    print(f"norm drift: {drift:.3e}")
    if t > 0:
        print("features: " + json.dumps(_features_summary(cfg, field.density), sort_keys=True))
    return EXIT_OK


def cmd_propagate(cfg: ExperimentConfig, out: Outputs) -> int:
    z = _require(cfg, "run.z", "propagate")
    k0 = _require(cfg, "dispersion.k0", "propagate")
    mode = cfg["run.mode"]
    field0 = build(cfg.aperture, cfg.lattice)
    x = cfg.lattice.x
    if mode == "fraunhofer":
        if z == 0:
            raise ConfigError("run.z", "Fraunhofer propagation needs z > 0")
        far = propagate_fraunhofer(field0, k0, z, threshold=cfg["run.fraunhofer_threshold"])
        out.density("propagate_density.csv", x, far.density)
        ref, label = _reference_pattern(cfg, x, z / k0)
        curves = {"Fraunhofer": far.density} | ({label: ref} if ref is not None else {})
        out.figure("propagate.png", plotting.plot_densities, x, curves, title=f"z = {z:g}")
        state = "valid" if far.valid else "NOT valid"
        print(f"quadratic aperture phase {far.quadratic_phase:.3e} rad: far-field approximation {state}")
        return EXIT_OK
    propagate = propagate_fresnel if mode == "fresnel" else propagate_exact
    field = propagate(field0, k0, z)
    _edge_guard(cfg, field.density, "propagated density")
    out.field("propagate_field.csv", field)
    out.density("propagate_density.csv", x, field.density)
    ref, label = _reference_pattern(cfg, x, z / k0)
    out.figure(
        "propagate.png", plotting.plot_evolution, x, field0.density, field.density,
        reference=ref, reference_label=label, title=f"{mode}, z = {z:g}",
    )
    n0 = norm_squared(field0)
    print(f"norm drift: {abs(norm_squared(field) - n0) / n0:.3e}")
    return EXIT_OK


def _match(cfg: ExperimentConfig, tolerance=None):
    z = _require(cfg, "run.z", "match")
    mode = cfg["run.mode"]
    if mode not in DEFAULT_TOLERANCE:
        raise ConfigError("run.mode", f"match compares against fresnel or exact propagation, not {mode!r}")
    tol = tolerance if tolerance is not None else cfg["run.tolerance"]
    return match_fields(
        cfg.aperture, cfg.dispersion, cfg.lattice, z, mode=mode, tol=tol,
        time_scale=cfg["run.time_scale"], edge_tol=cfg["run.edge_tol"],
    )


def cmd_match(cfg: ExperimentConfig, out: Outputs, tolerance=None) -> int:
    report, fields = _match(cfg, tolerance)
    text = report.to_json() + "\n"
    out.text("match_report.json", text)
    # JSON has no comment syntax, so the resolved config goes to a sidecar
    out.text("match_report.config.json", json.dumps(cfg.values, indent=2, sort_keys=True) + "\n")
    out.figure(
        "match.png", plotting.plot_densities, cfg.lattice.x,
        {f"evolved, t = {report.t:.4g}": fields.evolved.density,
         f"{report.mode}, z = {report.z:.4g}": fields.propagated.density},
        title=f"linf = {report.linf_peak:.2e} ({report.verdict})",
    )
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_pattern(cfg: ExperimentConfig, out: Outputs) -> int:
    ap = cfg.aperture
    if cfg["run.t"] is not None:
        t = cfg["run.t"]
    elif cfg["run.z"] is not None:
        t = transit_time(cfg.dispersion, cfg["run.z"])
    else:
        raise ConfigError("run.t", "pattern needs run.t or run.z")
    if t <= 0:
        raise ConfigError("run.t", "pattern needs a positive time")
    if ap.kind not in (Kind.RECT, Kind.DOUBLE_SLIT):
        raise ConfigError("aperture.kind", "closed-form patterns exist for Rect and DoubleSlit only")
    density, label = _reference_pattern(cfg, cfg.lattice.x, spreading_coefficient(cfg.dispersion) * t)
    out.density("pattern.csv", cfg.lattice.x, density)
    out.figure("pattern.png", plotting.plot_densities, cfg.lattice.x, {label: density}, title=f"t = {t:g}")
    print("features: " + json.dumps(_features_summary(cfg, density), sort_keys=True))
    return EXIT_OK


def _sweep_row(values: dict, parameter: str, value: float, tolerance=None) -> dict:
    cfg = resolve({**values, SWEEP_KEYS[parameter]: value})
    report, fields = _match(cfg, tolerance)
    row = {"parameter": parameter, "value": value, **report.to_dict()}
    feat = extract_features(fields.evolved.density, cfg.lattice, min_height=cfg["run.fringe_min_height"])
    row["fringe_spacing"] = feat.fringe_spacing
    row["fringe_error"] = None
    if cfg.aperture.kind is Kind.DOUBLE_SLIT and feat.fringe_spacing is not None:
        expected = 2 * np.pi * report.z * cfg["run.time_scale"] / (report.k0 * cfg.aperture.d)
        row["fringe_error"] = abs(feat.fringe_spacing / expected - 1)
    return row


def _sweep_text(config_json, rows, note=None):
    columns = {name: [row[name] for row in rows] for name in SWEEP_COLUMNS}
    text = _csv_text(config_json, columns)
    if note:
        text += f"# {note}\n"
    return text


def cmd_sweep(cfg: ExperimentConfig, out: Outputs, parameter, values, jobs=1, tolerance=None) -> int:
    if parameter not in SWEEP_KEYS:
        raise ConfigError(None, f"--param must be one of {', '.join(SWEEP_KEYS)}, got {parameter!r}")
    if not values:
        raise ConfigError(None, "--values is empty")
    for v in values:
        if not np.isfinite(v):
            raise ConfigError(None, f"--values contains a non-finite entry {v!r}")
    base = dict(cfg.raw)
    rows: list[dict] = []
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_sweep_row, base, parameter, v, tolerance) for v in values]
                for fut in futures:
                    rows.append(fut.result())
        else:
            for v in values:
                rows.append(_sweep_row(base, parameter, v, tolerance))
    except PacketOpticsError as exc:
        failed = values[len(rows)]
        out.text("sweep.csv", _sweep_text(
            out.config_json, rows,
            note=f"aborted at {parameter}={failed!r} after {len(rows)} of {len(values)} rows: {exc}",
        ))
        raise
    out.text("sweep.csv", _sweep_text(out.config_json, rows))
    metrics = {"linf_peak": [r["linf_peak"] for r in rows]}
    if any(r["fringe_error"] is not None for r in rows):
        metrics["fringe_error"] = [np.nan if r["fringe_error"] is None else r["fringe_error"] for r in rows]
    out.figure("sweep.png", plotting.plot_sweep, parameter, values, metrics)
    for r in rows:
        print(f"{parameter}={r['value']:.6g} linf_peak={r['linf_peak']:.3e} verdict={r['verdict']}")
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    items = [s for s in text.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON config with dotted keys")
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="set a config key; VALUE is parsed as JSON when possible (repeatable)",
    )
    common.add_argument("--tolerance", type=float, help="pass tolerance on linf_peak for match/sweep")
    common.add_argument("--plot", action="store_true", help="also render PNG figures")

    parser = argparse.ArgumentParser(prog="packetoptics", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="evolve the aperture in time to run.t")
    sub.add_parser("propagate", parents=[common], help="propagate the aperture in space to run.z")
    sub.add_parser("match", parents=[common], help="compare evolution at z/v_g with propagation to z")
    sub.add_parser("pattern", parents=[common], help="closed-form far-field pattern")
    sweep = sub.add_parser("sweep", parents=[common], help="repeat match over a parameter")
    sweep.add_argument("--param", required=True, choices=sorted(SWEEP_KEYS))
    sweep.add_argument("--values", required=True, type=_float_list, help="comma-separated values")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes (rows stay in input order)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = list(args.override) + (["output.plot=true"] if args.plot else [])
        cfg = load_config(args.config, overrides)
        out = Outputs(args.out, cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg, out)
        if args.command == "propagate":
            return cmd_propagate(cfg, out)
        if args.command == "match":
            return cmd_match(cfg, out, args.tolerance)
        if args.command == "pattern":
            return cmd_pattern(cfg, out)
        return cmd_sweep(cfg, out, args.param, args.values, args.jobs, args.tolerance)
    except NumericalGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except PacketOpticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
