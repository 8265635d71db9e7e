"""Command-line front end.

Exit codes: 0 ok, 2 usage, 3 no solution, 4 numerical tolerance failure,
5 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__, sweep
from .angle_solver import (
    contour_theta1,
    equiprobable_curve,
    equiprobable_partner,
    make_pair,
    select_pair,
)
from .errors import ComptonLabError, DomainError, NoSolutionError, ToleranceError
from .interferometer import build_model, detection_probability, distinguishability, visibility_from_scan
from .kinematics import CODATA2018, compton_shift, config_from_epsilon, make_config, recoil, wavelength_ratio
from .klein_nishina import diff_cross_section, kn_dimensionless
from .serialize import Record, Table, to_csv, to_json
from .spectral import MarkerOverlap

EXIT_OK, EXIT_USAGE, EXIT_NO_SOLUTION, EXIT_TOLERANCE, EXIT_IO = 0, 2, 3, 4, 5

COMMANDS = ("shift", "xsection", "equiprobable", "pair", "overlap", "pd", "fig2", "fig3", "fig4", "reproduce")

EPSILON_A = CODATA2018.compton_wavelength / 1e-10
FIG3A_MULTIPLIERS = (10.0, 7.0, 4.0, 2.0, 1.0, 0.5, 0.1)
FIG3_PANELS = {"fig3b": 0.1, "fig3c": 1.0, "fig3d": 10.0}
DEFAULT_CONTOUR_TARGETS = (0.005, 0.01, 0.024, 0.054, 0.1, 0.2, 0.27)
DEFAULT_SIGMA = 0.1

_LENGTH_UNITS = {"m": 1.0, "nm": 1e-9, "pm": 1e-12, "A": 1e-10, "Å": 1e-10}
_LENGTH_RE = re.compile(r"^\s*(?P<num>[^a-zA-ZÅ]+?(?:[eE][+-]?\d+)?)\s*(?P<unit>pm|nm|A|Å|m)\s*$")
_ANGLE_RE = re.compile(r"^\s*(?P<num>.+?)\s*(?P<unit>rad|deg)?\s*$")


class UsageError(ComptonLabError):
    """Malformed or conflicting command-line input."""


@dataclass
class RunConfig:
    command: str
    lambda0: float | None = None
    epsilon: float | None = None
    sigma_over_lambda0: float = DEFAULT_SIGMA
    theta: float | None = None
    theta0: float | None = None
    theta1: float | None = None
    phi: float | None = None
    zeta: float | None = None
    abs_a: float | None = None
    target_dlrel: float | None = None
    points: int = sweep.DEFAULT_THETA_POINTS
    phi_points: int = sweep.DEFAULT_PHI_POINTS
    zeta_points: int = sweep.DEFAULT_ZETA_POINTS
    zeta_max: float = sweep.DEFAULT_ZETA_MAX
    theta_points: int = sweep.DEFAULT_THETA_POINTS
    theta1_points: int = sweep.DEFAULT_THETA1_POINTS
    targets: tuple = DEFAULT_CONTOUR_TARGETS
    curves: bool = False
    format: str = "csv"
    output: str | None = None
    outdir: str = "results"
    threads: int | None = None
    extra: dict = field(default_factory=dict)

    def scattering(self):
        """ScatteringConfig from whichever of lambda0 / epsilon was given."""
        if self.lambda0 is not None:
            return make_config(self.lambda0)
        if self.epsilon is not None:
            return config_from_epsilon(self.epsilon)
        raise UsageError(f"{self.command}: one of --lambda0 or --epsilon is required")


def parse_length(text: str) -> float:
    """'1A', '2.4pm', '1e-10m' -> meters. A unit suffix is mandatory."""
    m = _LENGTH_RE.match(str(text))
    if not m:
        raise UsageError(f"length {text!r} needs a unit suffix (m, nm, A, pm)")
    try:
        value = float(m["num"]) * _LENGTH_UNITS[m["unit"]]
    except ValueError:
        raise UsageError(f"malformed length {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise UsageError(f"length must be positive and finite, got {text!r}")
    return value


def parse_angle(text: str) -> float:
    """'1.075', '1.075rad', '61.59deg' -> radians (radians by default)."""
    m = _ANGLE_RE.match(str(text))
    try:
        value = float(m["num"]) if m else float("nan")
    except ValueError:
        value = float("nan")
    if not math.isfinite(value):
        raise UsageError(f"malformed angle {text!r}")
    return math.radians(value) if m["unit"] == "deg" else value


def _finite(kind):
    def convert(text):
        try:
            value = kind(text)
        except ValueError:
            raise UsageError(f"malformed number {text!r}") from None
        if not math.isfinite(value):
            raise UsageError(f"number must be finite, got {text!r}")
        return value

    return convert


def _positive_int(text):
    value = _finite(int)(text)
    if value < 1:
        raise UsageError(f"expected a positive integer, got {text!r}")
    return value


def _targets(text):
    return tuple(_finite(float)(t) for t in str(text).split(",") if t.strip())


_CONVERTERS = {
    "lambda0": parse_length,
    "epsilon": _finite(float),
    "sigma_over_lambda0": _finite(float),
    "theta": parse_angle,
    "theta0": parse_angle,
    "theta1": parse_angle,
    "phi": parse_angle,
    "zeta": _finite(float),
    "abs_a": _finite(float),
    "target_dlrel": _finite(float),
    "points": _positive_int,
    "phi_points": _positive_int,
    "zeta_points": _positive_int,
    "zeta_max": _finite(float),
    "theta_points": _positive_int,
    "theta1_points": _positive_int,
    "targets": _targets,
    "curves": lambda t: str(t).strip().lower() in ("1", "true", "yes", "on"),
    "format": str,
    "output": str,
    "outdir": str,
    "threads": _positive_int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat 'key = value' file; flags override it")
    common.add_argument("--lambda0", help="incident wavelength with unit, e.g. 1A, 100pm")
    common.add_argument("--epsilon", help="photon energy over electron rest energy")
    common.add_argument("--sigma", dest="sigma_over_lambda0", help="marker line width in units of lambda0")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--threads", help="sweep worker threads")

    parser = _Parser(prog="compton-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *opts):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for flag, dest, h in opts:
            if dest == "curves":
                p.add_argument(flag, dest=dest, action="store_const", const="true", help=h)
            else:
                p.add_argument(flag, dest=dest, help=h)
        return p

    add("shift", "scattered wavelength and electron recoil", ("--theta", "theta", "scattering angle"))
    add(
        "xsection",
        "Klein-Nishina cross section",
        ("--theta", "theta", "single angle; omit for a curve"),
        ("--theta-points", "theta_points", "curve resolution"),
    )
    add(
        "equiprobable",
        "equiprobable partner or curve",
        ("--theta0", "theta0", "near-branch angle; omit for the curve"),
        ("--points", "points", "curve samples"),
    )
    add("pair", "pair with a given relative difference", ("--target-dlrel", "target_dlrel", "target"))
    add(
        "overlap",
        "marker overlap between two arms",
        ("--theta0", "theta0", "arm 0 angle"),
        ("--theta1", "theta1", "arm 1 angle"),
        ("--zeta", "zeta", "separation over width, instead of angles"),
    )
    add(
        "pd",
        "detection probability",
        ("--phi", "phi", "relative phase; omit for a scan"),
        ("--abs-a", "abs_a", "overlap magnitude"),
        ("--zeta", "zeta", "separation over width"),
        ("--theta0", "theta0", "arm 0 angle"),
        ("--theta1", "theta1", "arm 1 angle"),
        ("--phi-points", "phi_points", "scan resolution"),
    )
    add(
        "fig2",
        "p_D over (phi, zeta)",
        ("--phi-points", "phi_points", "phi samples"),
        ("--zeta-points", "zeta_points", "zeta samples"),
        ("--zeta-max", "zeta_max", "largest zeta"),
    )
    add(
        "fig3",
        "equiprobable curve and contours, or cross-section curves",
        ("--theta-points", "theta_points", "theta samples"),
        ("--targets", "targets", "comma-separated contour levels"),
        ("--curves", "curves", "emit cross-section curves for the standard epsilon set"),
    )
    add(
        "fig4",
        "p_D over (phi, theta1) along the equiprobable curve",
        ("--phi-points", "phi_points", "phi samples"),
        ("--theta1-points", "theta1_points", "theta1 rows"),
    )
    add("reproduce", "regenerate every figure dataset", ("--outdir", "outdir", "output directory"))
    return parser


def read_config_file(path: str) -> dict:
    entries = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "sigma":
            key = "sigma_over_lambda0"
        if key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value
    return entries


def parse_config(argv: list[str]) -> RunConfig:
    """Parse flags (and an optional config file) into a RunConfig."""
    ns = vars(_build_parser().parse_args(argv))
    command = ns.pop("command")
    file_values = read_config_file(ns.pop("config")) if ns.get("config") else {}
    ns.pop("config", None)
    raw = dict(file_values)
    raw.update({k: v for k, v in ns.items() if v is not None})
    if raw.get("lambda0") is not None and raw.get("epsilon") is not None:
        raise UsageError("--lambda0 and --epsilon are mutually exclusive")
    cfg = RunConfig(command)
    known = {f.name for f in fields(RunConfig)}
    for key, value in raw.items():
        if key not in known:
            raise UsageError(f"unknown option {key!r}")
        setattr(cfg, key, _CONVERTERS[key](value))
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.sigma_over_lambda0 <= 0:
        raise UsageError("sigma must be positive")
    if cfg.epsilon is not None and cfg.epsilon <= 0:
        raise UsageError("epsilon must be positive")
    return cfg


def _echo(cfg: RunConfig, **extra) -> dict:
    meta = sweep.base_metadata(command=cfg.command)
    if cfg.lambda0 is not None or cfg.epsilon is not None:
        sc = cfg.scattering()
        meta["lambda0"] = sc.lambda0
        meta["epsilon"] = sc.epsilon
    meta.update(extra)
    return meta


def _pair_record(pair) -> dict:
    return {
        "epsilon": pair.epsilon,
        "theta0": pair.theta0,
        "theta1": pair.theta1,
        "xsection": pair.xsection,
        "delta_lambda_rel": pair.delta_lambda_rel,
        "lambda_theta0": pair.lambda_theta0,
        "lambda_theta1": pair.lambda_theta1,
    }


def _overlap_from(cfg: RunConfig) -> MarkerOverlap:
    if cfg.abs_a is not None:
        return MarkerOverlap(cfg.abs_a)
    if cfg.zeta is not None:
        return MarkerOverlap(math.exp(-0.25 * cfg.zeta**2), 0.0, cfg.zeta)
    if cfg.theta0 is not None and cfg.theta1 is not None:
        eps = cfg.scattering().epsilon
        pair = make_pair(eps, cfg.theta0, cfg.theta1, check=False)
        return build_model(eps, pair, cfg.sigma_over_lambda0).overlap
    raise UsageError(f"{cfg.command}: give --abs-a, --zeta, or --theta0 and --theta1")


def _require(cfg, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"{cfg.command}: --{name.replace('_', '-')} is required")


def run_subcommand(cfg: RunConfig):
    """Compute the result for `cfg.command` as a Record, Table or SweepGrid."""
    cmd = cfg.command
    if cmd == "shift":
        _require(cfg, "theta")
        sc = cfg.scattering()
        lam = float(compton_shift(sc, cfg.theta))
        r = recoil(sc, cfg.theta)
        return Record(
            {
                "lambda0": sc.lambda0,
                "theta": cfg.theta,
                "lambda_theta": lam,
                "delta_lambda": lam - sc.lambda0,
                "wavelength_ratio": float(wavelength_ratio(sc.epsilon, cfg.theta)),
                "electron_momentum": r.p_m,
                "recoil_angle": r.theta_m,
                "electron_energy": r.E_m,
            },
            _echo(cfg),
        )
    if cmd == "xsection":
        eps = cfg.scattering().epsilon
        if cfg.theta is not None:
            v = diff_cross_section(eps, cfg.theta)
            return Record(
                {"epsilon": eps, "theta": cfg.theta, "xsection": v.value_dimensionless, "xsection_m2_sr": v.value_absolute},
                _echo(cfg),
            )
        theta = sweep.default_theta_grid(cfg.theta_points)
        values = kn_dimensionless(eps, theta)
        r0sq = CODATA2018.classical_electron_radius**2
        return Table(["theta", "xsection", "xsection_m2_sr"], [[t, v, v * r0sq] for t, v in zip(theta, values)], _echo(cfg))
    if cmd == "equiprobable":
        eps = cfg.scattering().epsilon
        if cfg.theta0 is not None:
            return Record(_pair_record(make_pair(eps, cfg.theta0, equiprobable_partner(eps, cfg.theta0))), _echo(cfg))
        curve = equiprobable_curve(eps, cfg.points)
        cols = ["theta0", "theta1", "xsection", "delta_lambda_rel"]
        rows = [[p.theta0, p.theta1, p.xsection, p.delta_lambda_rel] for p in curve.pairs]
        return Table(cols, rows, _echo(cfg, omitted_points=curve.omitted))
    if cmd == "pair":
        _require(cfg, "target_dlrel")
        eps = cfg.scattering().epsilon
        return Record(_pair_record(select_pair(eps, cfg.target_dlrel)), _echo(cfg, target_dlrel=cfg.target_dlrel))
    if cmd == "overlap":
        ov = _overlap_from(cfg)
        return Record(
            {"magnitude": ov.magnitude, "phase": ov.phase, "zeta": ov.zeta, "distinguishability": distinguishability(ov)},
            _echo(cfg, sigma_over_lambda0=cfg.sigma_over_lambda0),
        )
    if cmd == "pd":
        ov = _overlap_from(cfg)
        meta = _echo(cfg, overlap_magnitude=ov.magnitude, sigma_over_lambda0=cfg.sigma_over_lambda0)
        if cfg.phi is not None:
            return Record({"phi": cfg.phi, "p_D": float(detection_probability(ov, cfg.phi))}, meta)
        phi = sweep.default_phi_grid(cfg.phi_points)
        p = detection_probability(ov, phi)
        meta["visibility"] = visibility_from_scan(np.column_stack([phi, p]))
        return Table(["phi", "p_D"], [[a, b] for a, b in zip(phi, p)], meta)
    if cmd == "fig2":
        return sweep.fig2_surface(
            sweep.default_phi_grid(cfg.phi_points),
            sweep.default_zeta_grid(cfg.zeta_points, cfg.zeta_max),
            cfg.threads,
        )
    if cmd == "fig3":
        theta = sweep.default_theta_grid(cfg.theta_points)
        if cfg.curves:
            return sweep.fig3a_curves([m * EPSILON_A for m in FIG3A_MULTIPLIERS], theta)
        eps = cfg.scattering().epsilon
        return panel_table(sweep.fig3_panel(eps, theta, cfg.targets, cfg.threads))
    if cmd == "fig4":
        eps = cfg.scattering().epsilon
        return sweep.fig4_surface(
            eps,
            cfg.sigma_over_lambda0,
            sweep.default_phi_grid(cfg.phi_points),
            sweep.default_theta1_grid(eps, cfg.theta1_points),
            cfg.threads,
        )
    raise UsageError(f"unknown command {cmd!r}")


def panel_table(panel: sweep.Fig3Panel) -> Table:
    """Long-format table: equiprobable samples first, then each contour."""
    rows = [["equiprobable", None, p.theta0, p.theta1, p.delta_lambda_rel] for p in panel.curve.pairs]
    for target, line in panel.contours.items():
        rows.extend(["contour", target, t0, t1, target] for t0, t1 in line)
    meta = sweep.base_metadata(
        figure="fig3_panel",
        epsilon=panel.epsilon,
        contour_targets=list(panel.contours),
        omitted_points=panel.curve.omitted,
    )
    return Table(["series", "target", "theta0", "theta1", "delta_lambda_rel"], rows, meta)


def reproduce_all(outdir, threads: int | None = None) -> dict:
    """Write every figure dataset plus manifest.json into `outdir`."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    theta = sweep.default_theta_grid()
    phi = sweep.default_phi_grid()
    eps_fig4 = 10.0 * EPSILON_A
    products = {
        "fig2.csv": sweep.fig2_surface(phi, sweep.default_zeta_grid(), threads),
        "fig3a.csv": sweep.fig3a_curves([m * EPSILON_A for m in FIG3A_MULTIPLIERS], theta),
    }
    for name, mult in FIG3_PANELS.items():
        products[f"{name}.csv"] = panel_table(
            sweep.fig3_panel(mult * EPSILON_A, theta, DEFAULT_CONTOUR_TARGETS, threads)
        )
    products["fig4b.csv"] = sweep.fig4_surface(
        eps_fig4, DEFAULT_SIGMA, phi, sweep.default_theta1_grid(eps_fig4), threads
    )
    hashes = {}
    for name, obj in products.items():
        data = to_csv(obj).encode("utf-8")
        (out / name).write_bytes(data)
        hashes[name] = hashlib.sha256(data).hexdigest()
    manifest = {
        "artifact_version": __version__,
        "files": hashes,
        "parameters": {
            "epsilon_A": EPSILON_A,
            "fig2": {"phi_points": phi.size, "zeta_points": sweep.DEFAULT_ZETA_POINTS, "zeta_max": sweep.DEFAULT_ZETA_MAX},
            "fig3a": {"epsilon_multipliers": list(FIG3A_MULTIPLIERS), "theta_points": theta.size},
            "fig3_panels": {
                name: {"epsilon_multiplier": mult, "epsilon": mult * EPSILON_A} for name, mult in FIG3_PANELS.items()
            },
            "contour_targets": list(DEFAULT_CONTOUR_TARGETS),
            "fig4b": {
                "epsilon_multiplier": 10.0,
                "epsilon": eps_fig4,
                "sigma_over_lambda0": DEFAULT_SIGMA,
                "phi_points": phi.size,
                "theta1_points": sweep.DEFAULT_THETA1_POINTS,
            },
            "constants": sweep.base_metadata()["constants"],
            "tolerances": sweep.base_metadata()["tolerances"],
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return manifest


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="\n")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        if cfg.command == "reproduce":
            manifest = reproduce_all(cfg.outdir, cfg.threads)
            _emit(json.dumps(manifest, indent=1) + "\n", cfg.output)
            return EXIT_OK
        result = run_subcommand(cfg)
        _emit(to_json(result) if cfg.format == "json" else to_csv(result), cfg.output)
        return EXIT_OK
    except (UsageError, DomainError) as exc:
        code, msg = EXIT_USAGE, f"usage error: {exc}"
    except NoSolutionError as exc:
        code, msg = EXIT_NO_SOLUTION, f"no solution: {exc}"
    except ToleranceError as exc:
        code, msg = EXIT_TOLERANCE, f"tolerance failure: {exc}"
    except OSError as exc:
        code, msg = EXIT_IO, f"i/o error: {exc}"
    except Exception as exc:  # noqa: BLE001 - every exit path maps to a documented code
        code, msg = EXIT_TOLERANCE, f"numerical failure: {type(exc).__name__}: {exc}"
    print(f"compton-lab: {msg}".replace("\n", " "), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
