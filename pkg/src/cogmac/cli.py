"""Command-line frontend: analyze, optimize, simulate, and sweep experiments.

Results go to stdout as JSON; --out additionally writes an RFC-4180 CSV plus
a run manifest (<out>.manifest.json) recording the resolved configuration,
seed, and tool version so any output can be reproduced bit-identically.
Floats are serialized with repr, which round-trips exactly.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentSettings, LoadedConfig, load_config, load_document, with_num_links
from .contention import MODES, RTS_CTS
from .errors import ConfigError, HeterogeneousModelError, InfeasibleError, SolverError
from .optimizer import optimize_joint
from .simulator import SimConfig, run_simulation
from .throughput import MULTI, PROTOCOLS, normalized_throughput

_ANALYZE_HEADER = ("tau_s", "w", "n", "nt", "pf_0", "p_busy_0", "expected_idle_channels")
_SIM_HEADER = ("replication", "seed", "empirical_nt", "ci95", "successes", "collisions")
_CURVE_HEADER = ("w", "tau_opt_s", "nt")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_manifest(out: Path, subcommand: str, config_path: str, loaded: LoadedConfig,
                    overrides: dict, seed):
    manifest = {
        "subcommand": subcommand,
        "config_path": str(config_path),
        "config_snapshot": loaded.snapshot,
        "overrides": overrides,
        "seed": seed,
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "output_paths": [str(out)],
    }
    Path(f"{out}.manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _resolve(args) -> tuple[LoadedConfig, ExperimentSettings, dict]:
    loaded = load_config(args.config)
    network = loaded.network
    overrides = {}
    if getattr(args, "mode", None) is not None:
        mode = RTS_CTS if args.mode == "rts" else args.mode
        network = dataclasses.replace(network, mode=mode)
        overrides["mode"] = mode
    exp = loaded.experiment
    for flag in ("tau", "w", "seed", "cycles", "replications", "protocol"):
        value = getattr(args, flag, None)
        if value is None:
            continue
        field = {"tau": "tau_s"}.get(flag, flag)
        exp = dataclasses.replace(exp, **{field: value})
        overrides[field] = value
    if exp.protocol not in PROTOCOLS:
        raise ConfigError(f"protocol must be one of {PROTOCOLS}")
    loaded = dataclasses.replace(loaded, network=network, experiment=exp)
    return loaded, exp, overrides


def _require_tau_w(loaded: LoadedConfig):
    exp = loaded.experiment
    if exp.tau_s is None:
        raise ConfigError("sensing time is required: pass --tau or set experiment.tau_s")
    w = exp.w if exp.w is not None else loaded.network.backoff.w_min
    return exp.tau_s, w


def _analysis_row(loaded: LoadedConfig, tau: float, w: int):
    report = normalized_throughput(loaded.network, tau, w, loaded.experiment.protocol)
    row = (
        tau,
        w,
        loaded.network.num_links,
        report.nt,
        report.pf_per_link[0],
        report.p_busy_per_link[0],
        report.expected_idle_channels,
    )
    return report, row


def cmd_analyze(args) -> int:
    loaded, exp, overrides = _resolve(args)
    tau, w = _require_tau_w(loaded)
    report, row = _analysis_row(loaded, tau, w)
    payload = {
        "nt": report.nt,
        "tau_s": tau,
        "w": w,
        "protocol": exp.protocol,
        "mode": loaded.network.mode,
        "num_links": loaded.network.num_links,
        "num_channels": loaded.network.num_channels,
        "pf_per_link": list(report.pf_per_link),
        "p_busy_per_link": list(report.p_busy_per_link),
        "pr_n": list(report.pr_n),
        "per_n0_conditional": list(report.per_n0_conditional),
        "expected_idle_channels": report.expected_idle_channels,
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        out = Path(args.out)
        _write_csv(out, _ANALYZE_HEADER, [row])
        _write_manifest(out, "analyze", args.config, loaded, overrides, exp.seed)
    return 0


def cmd_optimize(args) -> int:
    loaded, exp, overrides = _resolve(args)
    result = optimize_joint(loaded.network, exp.protocol)
    payload = {
        "tau_star_s": result.tau_star_s,
        "w_star": result.w_star,
        "nt_star": result.nt_star,
        "protocol": exp.protocol,
        "mode": loaded.network.mode,
        "evaluations": result.evaluations,
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        out = Path(args.out)
        _write_csv(out, _CURVE_HEADER, result.per_w_curve)
        _write_manifest(out, "optimize", args.config, loaded, overrides, exp.seed)
    return 0


def _simulate_one(doc, mode, tau, w, cycles, seed):
    """Top-level worker so replications can run in separate processes."""
    loaded = load_document(doc)
    network = loaded.network
    if mode is not None:
        network = dataclasses.replace(network, mode=mode)
    if w is not None:
        network = network.with_backoff(w)
    sim = SimConfig(network=network, tau_s=tau, num_cycles=cycles, rng_seed=seed)
    report = run_simulation(sim)
    return (
        report.empirical_nt,
        report.ci95_halfwidth,
        report.successes,
        report.collisions,
    )


def cmd_simulate(args) -> int:
    loaded, exp, overrides = _resolve(args)
    tau, w = _require_tau_w(loaded)
    # validate eagerly so infeasible parameters fail before any work
    SimConfig(network=loaded.network, tau_s=tau, num_cycles=exp.cycles, rng_seed=exp.seed)
    mode = overrides.get("mode")
    tasks = [
        (loaded.snapshot, mode, tau, w, exp.cycles, exp.seed + k)
        for k in range(exp.replications)
    ]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_simulate_one, *zip(*tasks)))
    else:
        results = [_simulate_one(*task) for task in tasks]
    rows = [
        (k, exp.seed + k, nt, ci, succ, coll)
        for k, (nt, ci, succ, coll) in enumerate(results)
    ]
    nts = np.array([r[2] for r in rows])
    payload = {
        "tau_s": tau,
        "w": w,
        "cycles": exp.cycles,
        "replications": exp.replications,
        "mean_empirical_nt": float(nts.mean()),
        "per_replication": [
            {"replication": r[0], "seed": r[1], "empirical_nt": r[2], "ci95": r[3]}
            for r in rows
        ],
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        out = Path(args.out)
        _write_csv(out, _SIM_HEADER, rows)
        _write_manifest(out, "simulate", args.config, loaded, overrides, exp.seed)
    return 0


_SWEEP_AXES = ("n", "tau", "w")


def _axis_values(axis: str, spec) -> list:
    if isinstance(spec, list):
        values = spec
    elif isinstance(spec, dict):
        try:
            start, stop, num = spec["start"], spec["stop"], spec["num"]
        except KeyError as exc:
            raise ConfigError(f"sweep axis {axis!r} needs start/stop/num or a value list") from exc
        scale = spec.get("scale", "linear")
        if scale == "log":
            values = list(np.geomspace(start, stop, num))
        elif scale == "linear":
            values = list(np.linspace(start, stop, num))
        else:
            raise ConfigError(f"sweep axis {axis!r}: unknown scale {scale!r}")
    else:
        raise ConfigError(f"sweep axis {axis!r} must be a list or a range object")
    if not values:
        raise ConfigError(f"sweep axis {axis!r} is empty")
    if axis in ("n", "w"):
        values = [int(v) for v in values]
    else:
        values = [float(v) for v in values]
    return values


def _sweep_point(doc, mode, protocol, default_tau, default_w, n, tau, w):
    """Top-level worker evaluating one sweep grid point."""
    loaded = load_document(doc)
    if n is not None:
        loaded = with_num_links(loaded, n)
    network = loaded.network
    if mode is not None:
        network = dataclasses.replace(network, mode=mode)
    tau_eff = tau if tau is not None else default_tau
    w_eff = w if w is not None else default_w
    if tau_eff is None:
        raise ConfigError("sweep without a tau axis requires --tau or experiment.tau_s")
    report = normalized_throughput(network, tau_eff, w_eff, protocol)
    return (
        tau_eff,
        w_eff,
        network.num_links,
        report.nt,
        report.pf_per_link[0],
        report.p_busy_per_link[0],
        report.expected_idle_channels,
    )


def cmd_sweep(args) -> int:
    loaded, exp, overrides = _resolve(args)
    sweep = exp.sweep
    if not sweep:
        raise ConfigError("sweep requires an experiment.sweep section")
    unknown = sorted(set(sweep) - set(_SWEEP_AXES))
    if unknown:
        raise ConfigError(f"unknown sweep axis {unknown[0]!r}; valid axes: n, tau, w")
    if len(sweep) > 2:
        raise ConfigError("sweep supports at most two axes")

    axes = [axis for axis in _SWEEP_AXES if axis in sweep]
    grids = {axis: _axis_values(axis, sweep[axis]) for axis in axes}
    default_w = exp.w if exp.w is not None else loaded.network.backoff.w_min
    points = []
    # row order is lexicographic in the fixed axis order (n, tau, w)
    def _expand(axis_idx, point):
        if axis_idx == len(axes):
            points.append(dict(point))
            return
        axis = axes[axis_idx]
        for value in grids[axis]:
            point[axis] = value
            _expand(axis_idx + 1, point)
    _expand(0, {})

    mode = overrides.get("mode")
    tasks = [
        (
            loaded.snapshot,
            mode,
            exp.protocol,
            exp.tau_s,
            default_w,
            pt.get("n"),
            pt.get("tau"),
            pt.get("w"),
        )
        for pt in points
    ]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, *zip(*tasks)))
    else:
        rows = [_sweep_point(*task) for task in tasks]

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(_ANALYZE_HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    sys.stdout.write(buffer.getvalue())
    if args.out:
        out = Path(args.out)
        _write_csv(out, _ANALYZE_HEADER, rows)
        _write_manifest(out, "sweep", args.config, loaded, overrides, exp.seed)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogmac",
        description="Throughput analysis and simulation of sensing-based cognitive MAC protocols.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    jobs_default = int(os.environ.get("COGMAC_JOBS", "1"))
    handlers = {
        "analyze": cmd_analyze,
        "optimize": cmd_optimize,
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
    }
    for name, handler in handlers.items():
        cmd = sub.add_parser(name)
        cmd.set_defaults(handler=handler)
        cmd.add_argument("--config", required=True, help="path to the JSON config file")
        cmd.add_argument("--out", help="CSV output path; a run manifest is written alongside")
        cmd.add_argument("--seed", type=int, help="base RNG seed")
        cmd.add_argument("--cycles", type=int, help="simulated cycles per replication")
        cmd.add_argument("--replications", type=int, help="independent simulation replications")
        cmd.add_argument("--jobs", type=int, default=jobs_default,
                         help="worker processes (default from COGMAC_JOBS)")
        cmd.add_argument("--mode", choices=["basic", "rts"], help="handshake mode override")
        cmd.add_argument("--protocol", choices=["single", "multi"], help="analytical model")
        cmd.add_argument("--tau", type=float, help="sensing time in seconds")
        cmd.add_argument("--w", type=int, help="contention window")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, HeterogeneousModelError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver failed to converge: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
