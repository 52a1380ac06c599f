"""Command-line front end: experiment configuration, CSV output, manifests.

Every run writes one CSV (fixed header, shortest round-trip float
formatting) plus a `<out>.manifest` key-value file recording the fully
resolved configuration, seed and tool version, enough to reproduce the CSV
byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelParams, db_to_linear
from .correlation import CorrelationModel, CorrelationParams
from .errors import ConfigError, SpectrumDegeneracyError
from .kernels import kernel_backend
from .simulation import (
    SimConfig,
    mc_distortion_mean,
    mc_outage,
    outage_curves,
    sweep_eigenvalue,
    sweep_nodes,
)
from .validation import run_validation

COMMANDS = ("fig2", "fig3", "fig4", "outage", "distortion", "validate")

_BASE_DEFAULTS = {
    "n_nodes": 10,
    "side": 20.0,
    "source_distance": 30.0,
    "theta1": 250.0,
    "theta2": 1.0,
    "model": "full-rank",
    "sigma_s2": 1.0,
    "sigma_g2": 1.0,
    "observation_snr_db": 20.0,
    "communication_snr_db": 20.0,
    "p_tot_db": 10.0,
    "sigma_n2": None,
    "sigma_nu2": None,
    "p_tot": None,
    "n_geometries": 1000,
    "n_fading_draws": 1,
    "seed": 1,
    "threads": 1,
    "fading_enabled": True,
    "approx_eigen": False,
    "delta_grid": None,
    "node_counts": None,
    "source_distances": None,
}

_COMMAND_DEFAULTS = {
    "fig2": {
        "fading_enabled": False,
        "node_counts": [1, 5, 10, 50, 100, 300, 500],
    },
    "fig3": {"delta_grid": np.round(np.linspace(0.05, 0.95, 19), 10).tolist()},
    "fig4": {
        "delta_grid": np.linspace(0.0, 1.0, 101).tolist(),
        "source_distances": [0.0, 30.0, 50.0],
    },
    "outage": {
        "n_geometries": 1,
        "n_fading_draws": 100000,
        "delta_grid": np.round(np.linspace(0.05, 0.95, 19), 10).tolist(),
    },
    "distortion": {"fading_enabled": False},
    "validate": {},
}

_INT_KEYS = {"n_nodes", "n_geometries", "n_fading_draws", "seed", "threads"}
_FLOAT_KEYS = {
    "side",
    "source_distance",
    "theta1",
    "theta2",
    "sigma_s2",
    "sigma_g2",
    "observation_snr_db",
    "communication_snr_db",
    "p_tot_db",
    "sigma_n2",
    "sigma_nu2",
    "p_tot",
}
_BOOL_KEYS = {"fading_enabled", "approx_eigen"}
_LIST_KEYS = {"delta_grid", "source_distances", "node_counts"}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def parse_value_list(text: str, as_int: bool = False):
    """Parse a comma list ('0.1,0.2') or a start:stop:count linspace spec."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"expected START:STOP:COUNT, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        values = np.linspace(start, stop, count).tolist()
    else:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    if as_int:
        return [int(round(v)) for v in values]
    return values


def read_config_file(path: str) -> dict:
    """Flat KEY = VALUE text file; '#' starts a comment."""
    out = {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected KEY = VALUE")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _BASE_DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _BOOL_KEYS:
            return _parse_bool(value)
        if key in _LIST_KEYS:
            return parse_value_list(value, as_int=(key == "node_counts"))
        if key == "model":
            return value
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    return value


def resolve_settings(command: str, args: argparse.Namespace) -> dict:
    """Defaults, then config file, then command-line flags."""
    settings = dict(_BASE_DEFAULTS)
    settings.update(_COMMAND_DEFAULTS[command])
    if args.config:
        for key, value in read_config_file(args.config).items():
            settings[key] = _coerce(key, value)
    if args.seed is not None:
        settings["seed"] = args.seed
    if args.threads is not None:
        settings["threads"] = args.threads
    if args.model is not None:
        settings["model"] = args.model
    if args.nodes is not None:
        settings["node_counts"] = parse_value_list(args.nodes, as_int=True)
    if args.delta_grid is not None:
        settings["delta_grid"] = parse_value_list(args.delta_grid)
    if args.source_distances is not None:
        settings["source_distances"] = parse_value_list(args.source_distances)
    if args.geometries is not None:
        settings["n_geometries"] = args.geometries
    if args.draws is not None:
        settings["n_fading_draws"] = args.draws
    if args.no_fading:
        settings["fading_enabled"] = False
    if args.approx_eigen:
        settings["approx_eigen"] = True
    if settings["delta_grid"] is None:
        settings["delta_grid"] = np.round(np.linspace(0.05, 0.95, 19), 10).tolist()
    if settings["node_counts"] is None:
        settings["node_counts"] = [1, 5, 10, 50, 100, 300, 500]
    if settings["source_distances"] is None:
        settings["source_distances"] = [0.0, 30.0, 50.0]
    return settings


def build_channel(settings: dict) -> ChannelParams:
    sigma_s2 = settings["sigma_s2"]
    sigma_n2 = settings["sigma_n2"]
    if sigma_n2 is None:
        sigma_n2 = sigma_s2 / db_to_linear(settings["observation_snr_db"])
    sigma_nu2 = settings["sigma_nu2"]
    if sigma_nu2 is None:
        sigma_nu2 = (sigma_s2 + sigma_n2) / db_to_linear(
            settings["communication_snr_db"]
        )
    p_tot = settings["p_tot"]
    if p_tot is None:
        p_tot = sigma_s2 * db_to_linear(settings["p_tot_db"])
    try:
        return ChannelParams(sigma_s2, sigma_n2, sigma_nu2, settings["sigma_g2"], p_tot)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_sim_config(settings: dict) -> SimConfig:
    try:
        return SimConfig(
            n_nodes=settings["n_nodes"],
            side=settings["side"],
            source_distance=settings["source_distance"],
            corr_params=CorrelationParams(settings["theta1"], settings["theta2"]),
            model=CorrelationModel(settings["model"]),
            channel=build_channel(settings),
            n_geometries=settings["n_geometries"],
            n_fading_draws=settings["n_fading_draws"],
            seed=settings["seed"],
            fading_enabled=settings["fading_enabled"],
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_manifest(path: Path, command: str, settings: dict) -> None:
    lines = [
        f"tool=corrsense {__version__}",
        f"command={command}",
        f"kernel_backend={kernel_backend()}",
    ]
    for key in sorted(settings):
        value = settings[key]
        if isinstance(value, list):
            text = ",".join(_fmt(v) for v in value)
        else:
            text = _fmt(value) if value is not None else ""
        lines.append(f"{key}={text}")
    path.write_text("\n".join(lines) + "\n")


def _run_fig2(config, settings):
    rows = sweep_nodes(config, settings["node_counts"], threads=settings["threads"])
    return ["n", "model", "mean_d", "std_err"], [
        (r.n_nodes, r.model, r.mean_d, r.std_err) for r in rows
    ]


def _run_fig3(config, settings):
    points = outage_curves(
        config,
        np.asarray(settings["delta_grid"]),
        threads=settings["threads"],
        approx=settings["approx_eigen"],
    )
    return ["delta", "model", "p_closed", "p_mc", "ci_low", "ci_high"], [
        (p.delta, p.model, p.p_closed, p.p_mc, p.ci_low, p.ci_high) for p in points
    ]


def _run_fig4(config, settings):
    mode = "approx" if settings["approx_eigen"] else "exact"
    rows = sweep_eigenvalue(
        config,
        settings["source_distances"],
        np.asarray(settings["delta_grid"]),
        threads=settings["threads"],
        mode=mode,
    )
    return [
        "delta",
        "source_distance",
        "lambda_exact_norm",
        "lambda_bound_norm",
    ], [
        (r.delta, r.source_distance, r.lambda_exact_norm, r.lambda_bound_norm)
        for r in rows
    ]


def _run_outage(config, settings):
    points = outage_curves(
        config,
        np.asarray(settings["delta_grid"]),
        models=(config.model,),
        threads=settings["threads"],
        approx=settings["approx_eigen"],
    )
    return ["delta", "model", "p_closed", "p_mc", "ci_low", "ci_high"], [
        (p.delta, p.model, p.p_closed, p.p_mc, p.ci_low, p.ci_high) for p in points
    ]


def _run_distortion(config, settings):
    mean, se = mc_distortion_mean(config, threads=settings["threads"])
    return ["n", "model", "mean_d", "std_err"], [
        (config.n_nodes, config.model.value, mean, se)
    ]


def _run_validate(config, settings):
    results = run_validation(config, threads=settings["threads"])
    for res in results:
        print(f"{res.status} {res.name}: {res.detail}")
    header = ["check", "status", "detail"]
    rows = [(r.name, r.status, r.detail) for r in results]
    if not all(r.passed for r in results):
        return header, rows, 1
    return header, rows, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrsense",
        description=(
            "Distributed LMMSE estimation over a coherent fading MAC: "
            "distortion, outage and eigenvalue experiments"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "fig2": "mean distortion vs node count for the three correlation models",
        "fig3": "closed-form and Monte Carlo outage curves per model",
        "fig4": "top outage eigenvalue and its lower bound vs target distortion",
        "outage": "outage curve for a single experiment configuration",
        "distortion": "mean normalized distortion for one configuration",
        "validate": "cross-check every closed form against the Monte Carlo oracle",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=help_text[name])
        sp.add_argument("--config", help="flat KEY = VALUE settings file")
        sp.add_argument("--seed", type=int, help="master RNG seed")
        sp.add_argument("--threads", type=int, help="worker threads")
        sp.add_argument("--out", help="output CSV path")
        sp.add_argument(
            "--model", choices=[m.value for m in CorrelationModel], help="correlation model"
        )
        sp.add_argument("--nodes", help="node counts, e.g. 1,5,10 (fig2)")
        sp.add_argument("--delta-grid", dest="delta_grid", help="targets, comma list or START:STOP:COUNT")
        sp.add_argument(
            "--source-distances", dest="source_distances", help="source distances in meters (fig4)"
        )
        sp.add_argument("--geometries", type=int, help="number of geometry draws")
        sp.add_argument("--draws", type=int, help="fading draws per geometry")
        sp.add_argument(
            "--no-fading", dest="no_fading", action="store_true", help="disable channel fading"
        )
        sp.add_argument(
            "--approx-eigen",
            dest="approx_eigen",
            action="store_true",
            help="use the signal-only eigenvalue approximation",
        )
    return parser


_RUNNERS = {
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "fig4": _run_fig4,
    "outage": _run_outage,
    "distortion": _run_distortion,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        settings = resolve_settings(command, args)
        config = build_sim_config(settings)
    except ConfigError as exc:
        print(f"corrsense: invalid configuration: {exc}", file=sys.stderr)
        return 2
    out_path = Path(args.out) if args.out else Path(f"{command}.csv")
    settings["out"] = str(out_path)
    status = 0
    try:
        if command == "validate":
            header, rows, status = _run_validate(config, settings)
        else:
            header, rows = _RUNNERS[command](config, settings)
    except SpectrumDegeneracyError as exc:
        print(f"corrsense: degenerate spectrum: {exc}", file=sys.stderr)
        return 3
    write_csv(out_path, header, rows)
    write_manifest(Path(str(out_path) + ".manifest"), command, settings)
    return status


if __name__ == "__main__":
    sys.exit(main())
