"""Command-line driver: single runs, sweeps, and noise-trace dumps.

Configuration comes from a JSON file and/or a named preset; command-line
flags override file fields.  Every command writes a manifest first, then
deterministic CSV data files, so re-running from the manifest reproduces
the data byte for byte.  Exit codes: 0 success, 2 configuration error,
1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, io
from .ensemble import (
    DEFAULT_UPDATE_CAP,
    EnsembleConfig,
    phase_diagram_sweep,
    run_ensemble,
    scan_config,
)
from .errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    InvalidParameterError,
    ResourceLimitError,
)
from .noise import CorrelationSpec, generate_fbm_trace, squash_to_phase
from .observables import classify_regime, fit_gamma, fit_hurst, longtime_avg_dispersion
from .presets import preset_names, resolve_preset

log = logging.getLogger("corrwalk")

DEFAULT_OUT_ROOT = "qwalk_out"


class ConfigError(InvalidParameterError):
    """Configuration problem; reported with exit code 2."""


def _load_config_file(path: str, command: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    # Manifests are accepted in place of bare configs.
    if "config" in payload and "command" in payload:
        if payload["command"] != command:
            raise ConfigError(
                f"manifest {path} was written by command {payload['command']!r}, "
                f"not {command!r}"
            )
        payload = payload["config"]
        if not isinstance(payload, dict):
            raise ConfigError(f"manifest {path} holds a malformed config")
    return payload


def _resolved_config(args, command: str, flag_fields: dict) -> dict:
    config: dict = {}
    if args.preset:
        preset = resolve_preset(args.preset)
        if preset["command"] != command:
            raise ConfigError(
                f"preset {args.preset!r} belongs to command {preset['command']!r}, not {command!r}"
            )
        config.update(preset["config"])
    if args.config:
        config.update(_load_config_file(args.config, command))
    for key, value in flag_fields.items():
        if value is not None:
            config[key] = value
    if args.seed is not None:
        config["seed"] = args.seed
    return config


def _field(config: dict, name: str, kind, *, required: bool = False, default=None):
    if name not in config or config[name] is None:
        if required:
            raise ConfigError(f"field {name!r}: required but missing")
        return default
    value = config[name]
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if kind is float:
            out = float(value)
            if not np.isfinite(out):
                raise ValueError
            return out
        if kind is bool:
            if not isinstance(value, bool):
                raise ValueError
            return value
        if kind is list:
            if not isinstance(value, (list, tuple)):
                raise ValueError
            return list(value)
    except (TypeError, ValueError):
        pass
    raise ConfigError(f"field {name!r}: expected {kind.__name__}, got {value!r}")


def _out_dir(args, command: str) -> Path:
    if args.out:
        return Path(args.out)
    root = Path(os.environ.get("QWALK_OUT", DEFAULT_OUT_ROOT))
    if args.preset:
        name = args.preset
    elif args.config:
        name = Path(args.config).stem
    else:
        name = command
    return root / name


def _write_manifest(out_dir: Path, command: str, config: dict, seed: int) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_json(
        out_dir / "manifest.json",
        {
            "tool": "corrwalk",
            "version": __version__,
            "command": command,
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "out_dir": str(out_dir),
            "master_seed": seed,
            "config": config,
        },
    )


def _hurst_entry(stats, fit_window) -> dict:
    t_last = int(stats.times[-1])
    contact = stats.boundary_contact_time
    t_eff = t_last if contact is None else min(t_last, int(contact))
    fallback = False
    if fit_window is not None:
        window = (int(fit_window[0]), int(fit_window[1]))
    else:
        window = (t_last // 5, t_eff)
    try:
        H, err = fit_hurst(stats, window)
    except (InsufficientDataError, DegenerateSeriesError, InvalidParameterError) as exc:
        if fit_window is not None:
            return {"error": str(exc), "window": list(window)}
        # The default window dies when boundary contact precedes T/5
        # (strongly ballistic runs); refit on the pre-contact span.
        window = (max(1, t_eff // 5), t_eff)
        fallback = True
        try:
            H, err = fit_hurst(stats, window)
        except (InsufficientDataError, DegenerateSeriesError, InvalidParameterError) as exc2:
            return {"error": str(exc2), "window": list(window)}
    entry = {"H": H, "stderr": err, "window": list(window)}
    if fallback:
        entry["window_fallback"] = True
    return entry


# --------------------------------------------------------------------------
# trace


def _cmd_trace(args) -> int:
    config = _resolved_config(
        args, "trace", {"nu": args.nu, "length": args.length, "raw": args.raw or None}
    )
    nu = _field(config, "nu", float, required=True)
    length = _field(config, "length", int, required=True)
    seed = _field(config, "seed", int, default=0)
    raw = _field(config, "raw", bool, default=False)
    padded = length + (length % 2)
    try:
        spec = CorrelationSpec(nu=nu, length=max(padded, 2), seed=seed)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc))

    out_dir = _out_dir(args, "trace")
    resolved = {"nu": nu, "length": length, "seed": seed, "raw": raw}
    _write_manifest(out_dir, "trace", resolved, seed)

    trace = generate_fbm_trace(spec)[:length]
    if raw:
        path = io.write_phase_csv(out_dir / "trace.csv", trace, value_label="value")
    else:
        path = io.write_phase_csv(out_dir / "trace.csv", squash_to_phase(trace).values, value_label="V")
    print(f"wrote {path}")
    return 0


# --------------------------------------------------------------------------
# run


def _parse_run_config(config: dict) -> dict:
    N = _field(config, "N", int)
    sizes = _field(config, "sizes", list)
    if (N is None) == (sizes is None):
        raise ConfigError("fields 'N'/'sizes': exactly one must be set")
    if sizes is not None:
        sizes = [int(n) for n in sizes]

    T = _field(config, "T", int)
    t_rule = config.get("t_rule")
    if T is not None and t_rule is not None:
        raise ConfigError("fields 'T'/'t_rule': at most one may be set")
    if T is None:
        t_rule = t_rule or "N/2"
        if t_rule not in ("N/2", "5N"):
            raise ConfigError(f"field 't_rule': expected 'N/2' or '5N', got {t_rule!r}")

    snapshot_times = _field(config, "snapshot_times", list, default=[])
    if snapshot_times and sizes is not None:
        raise ConfigError("field 'snapshot_times': only supported for single-size runs")

    fit_window = _field(config, "fit_window", list)
    if fit_window is not None and len(fit_window) != 2:
        raise ConfigError("field 'fit_window': expected [t_min, t_max]")

    return {
        "N": N,
        "sizes": sizes,
        "T": T,
        "t_rule": t_rule,
        "alpha_t": _field(config, "alpha_t", float, required=True),
        "beta_s": _field(config, "beta_s", float, required=True),
        "realizations": _field(config, "realizations", int, default=200),
        "seed": _field(config, "seed", int, default=0),
        "snapshot_times": [int(t) for t in snapshot_times],
        "normalize_variance": _field(config, "normalize_variance", bool, default=False),
        "snapshot_single": _field(config, "snapshot_single", bool, default=False),
        "sigma_window": _field(config, "sigma_window", int, default=100),
        "fit_window": fit_window,
        "update_cap": _field(config, "update_cap", int, default=DEFAULT_UPDATE_CAP),
    }


def _time_horizon(N: int, T: int | None, t_rule: str) -> int:
    if T is not None:
        return T
    return 5 * N if t_rule == "5N" else N // 2


def _cmd_run(args) -> int:
    config = _parse_run_config(_resolved_config(args, "run", {}))
    out_dir = _out_dir(args, "run")
    _write_manifest(out_dir, "run", config, config["seed"])

    try:
        base = EnsembleConfig(
            N=config["N"] or 2,
            T=1,
            alpha_t=config["alpha_t"],
            beta_s=config["beta_s"],
            realizations=config["realizations"],
            master_seed=config["seed"],
            normalize_variance=config["normalize_variance"],
            snapshot_single=config["snapshot_single"],
            update_cap=config["update_cap"],
        )
    except InvalidParameterError as exc:
        raise ConfigError(str(exc))

    entries = []
    points = []
    if config["sizes"] is not None:
        runs = [(N, _time_horizon(N, config["T"], config["t_rule"])) for N in config["sizes"]]
        per_size_seed = True
    else:
        N = config["N"]
        runs = [(N, _time_horizon(N, config["T"], config["t_rule"]))]
        per_size_seed = False

    for N, T in runs:
        try:
            if per_size_seed:
                cfg = scan_config(base, N, T)
            else:
                cfg = EnsembleConfig(
                    N=N,
                    T=T,
                    alpha_t=base.alpha_t,
                    beta_s=base.beta_s,
                    realizations=base.realizations,
                    master_seed=base.master_seed,
                    snapshot_times=tuple(config["snapshot_times"]),
                    normalize_variance=base.normalize_variance,
                    snapshot_single=base.snapshot_single,
                    update_cap=base.update_cap,
                )
        except InvalidParameterError as exc:
            raise ConfigError(str(exc))

        log.info("run N=%d T=%d alpha_t=%g beta_s=%g R=%d", N, T, cfg.alpha_t, cfg.beta_s, cfg.realizations)
        result = run_ensemble(cfg, workers=args.workers)
        stats = result.stats

        io.write_trajectory_csv(out_dir / f"trajectory_N{N}.csv", stats)
        if stats.snapshots:
            for t in sorted(stats.snapshots):
                io.write_profile_csv(out_dir / f"snapshot_N{N}_t{t}.csv", stats.snapshots[t])

        entry = {
            "N": N,
            "T": T,
            "master_seed": cfg.master_seed,
            "hurst": _hurst_entry(stats, config["fit_window"]),
            "boundary_contact_time": stats.boundary_contact_time,
            "contacted_realizations": result.contacted_realizations,
            "elapsed_seconds": result.elapsed_seconds,
        }
        try:
            sigma_bar = longtime_avg_dispersion(stats, config["sigma_window"])
            entry["sigma_bar"] = sigma_bar
            points.append((N, sigma_bar))
        except InsufficientDataError:
            entry["sigma_bar"] = None
        entries.append(entry)

    summary = {"config": config, "results": entries}
    if len(points) >= 3:
        gamma, err = fit_gamma(points)
        summary["gamma"] = {
            "value": gamma,
            "stderr": err,
            "regime": classify_regime(gamma).value,
            "points": [[n, s] for n, s in points],
        }
    io.write_json(out_dir / "summary.json", summary)
    print(f"wrote {out_dir / 'summary.json'}")
    return 0


# --------------------------------------------------------------------------
# phase-diagram


def _parse_sweep_config(config: dict) -> dict:
    grid_alpha = _field(config, "grid_alpha", list, required=True)
    grid_beta = _field(config, "grid_beta", list, required=True)
    sizes = _field(config, "sizes", list, required=True)
    if len(sizes) < 3:
        raise ConfigError("field 'sizes': need at least 3 lattice sizes")
    return {
        "grid_alpha": [float(a) for a in grid_alpha],
        "grid_beta": [float(b) for b in grid_beta],
        "sizes": [int(n) for n in sizes],
        "realizations": _field(config, "realizations", int, default=200),
        "seed": _field(config, "seed", int, default=0),
        "sigma_window": _field(config, "sigma_window", int, default=100),
        "normalize_variance": _field(config, "normalize_variance", bool, default=False),
        "update_cap": _field(config, "update_cap", int, default=DEFAULT_UPDATE_CAP),
    }


def _cmd_phase_diagram(args) -> int:
    config = _parse_sweep_config(_resolved_config(args, "phase-diagram", {}))
    out_dir = _out_dir(args, "phase-diagram")
    _write_manifest(out_dir, "phase-diagram", config, config["seed"])

    try:
        base = EnsembleConfig(
            N=max(config["sizes"]),
            T=max(config["sizes"]) // 2,
            alpha_t=0.0,
            beta_s=0.0,
            realizations=config["realizations"],
            master_seed=config["seed"],
            normalize_variance=config["normalize_variance"],
            update_cap=config["update_cap"],
        )
    except InvalidParameterError as exc:
        raise ConfigError(str(exc))

    sweep = phase_diagram_sweep(
        config["grid_alpha"],
        config["grid_beta"],
        base,
        config["sizes"],
        window_len=config["sigma_window"],
        workers=args.workers,
        out_dir=out_dir,
        force=args.force,
    )
    path = io.write_sweep_csv(out_dir / "grid.csv", sweep)
    print(f"wrote {path}")
    return 0


# --------------------------------------------------------------------------
# presets


def _cmd_presets(args) -> int:
    for name in preset_names():
        preset = resolve_preset(name)
        print(f"{name:16s} [{preset['command']}] {preset['description']}")
    return 0


# --------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file (or a previous manifest)")
    parser.add_argument("--preset", metavar="NAME", help="named preset; see 'corrwalk presets'")
    parser.add_argument("--seed", type=int, metavar="U64", help="override the master seed")
    parser.add_argument("--workers", type=int, metavar="INT", help="worker processes (default: serial)")
    parser.add_argument("--out", metavar="DIR", help="output directory (default: $QWALK_OUT/<name>)")
    parser.add_argument("--force", action="store_true", help="recompute completed sweep cells")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrwalk",
        description="Quantum walks on a chain with correlated coin-phase disorder.",
    )
    parser.add_argument("--version", action="version", version=f"corrwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", help="dump one correlated phase sequence as CSV")
    trace.add_argument("--nu", type=float, help="power-law exponent of the sequence")
    trace.add_argument("--length", type=int, help="sequence length M")
    trace.add_argument("--raw", action="store_true", help="dump the pre-squash trace instead")
    _add_common(trace)
    trace.set_defaults(func=_cmd_trace)

    run = sub.add_parser("run", help="disorder-averaged run(s): trajectories, snapshots, fits")
    _add_common(run)
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("phase-diagram", help="exponent map over an (alpha_t, beta_s) grid")
    _add_common(sweep)
    sweep.set_defaults(func=_cmd_phase_diagram)

    presets = sub.add_parser("presets", help="list the bundled presets")
    presets.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        target = getattr(exc, "filename", None)
        print(f"error: {exc}" + (f" (path: {target})" if target else ""), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
