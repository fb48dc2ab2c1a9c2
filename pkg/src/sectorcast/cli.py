"""Command-line front end: simulate, sweep, model, compare, snapshot.

Exit codes: 0 success, 2 configuration error, 3 output I/O error.  Angles
are degrees here and in config files.  Relative output paths resolve under
$SECTORCAST_OUTDIR when set; every output file is written atomically and
reruns of an identical invocation produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from . import configio
from .engine import propagate
from .experiments import SweepSpec, run_cell, run_sweep
from .leafmodel import DegenerateLeafError, build_leaf, predicted_ratio
from .render import render_svg
from .scenario import ConfigError, ScenarioConfig, derive_seed, generate
from .configio import atomic_write_text, ensure_writable

OUTDIR_ENV = "SECTORCAST_OUTDIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

_DEFAULT_OUTPUT = {
    "simulate": "simulate.json",
    "sweep": "sweep.csv",
    "compare": "compare.csv",
    "model": None,
    "snapshot": "snapshot.svg",
}


@dataclass(frozen=True)
class RunManifest:
    """One resolved invocation."""

    command: str
    config_path: str | None
    overrides: tuple[str, ...]
    output_path: str | None
    seed: int | None
    workers: int = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorcast",
        description="Directional sector-broadcast simulator and coverage-area model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "simulate": "run one scenario and report the flood outcome",
        "sweep": "run the (theta x N x d) Monte Carlo grid to CSV",
        "model": "print the triangle-chain area model for the configured cell",
        "compare": "sweep theta x N at fixed d and compare simulation to the model",
        "snapshot": "render one scenario as an SVG scene",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="config file (key = value text)")
        p.add_argument("--set", dest="overrides", metavar="KEY=VALUE", action="append",
                       default=[], help="override a config key (sweep keys: sweep.KEY)")
        p.add_argument("--seed", type=int, help="override the base seed")
        p.add_argument("--out", metavar="PATH", help="output file path")
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes for Monte Carlo trials (default 1)")
    return parser


def _load(manifest: RunManifest) -> tuple[ScenarioConfig, SweepSpec]:
    if manifest.config_path:
        try:
            with open(manifest.config_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        base_raw, sweep_raw = configio.parse_config_text(text, manifest.config_path)
    else:
        base_raw, sweep_raw = {}, {}
    configio.apply_overrides(base_raw, sweep_raw, list(manifest.overrides))
    config = configio.to_scenario_config(base_raw)
    if manifest.seed is not None:
        config = replace(config, seed=manifest.seed)
    spec = configio.to_sweep_spec(config, sweep_raw)
    return config, spec


def _resolve_out(manifest: RunManifest) -> str | None:
    path = manifest.output_path or _DEFAULT_OUTPUT[manifest.command]
    if path is None:
        return None
    if not os.path.isabs(path):
        path = os.path.join(os.environ.get(OUTDIR_ENV, "."), path)
    return path


def cmd_simulate(manifest: RunManifest) -> int:
    config, _ = _load(manifest)
    out_path = _resolve_out(manifest)
    ensure_writable(out_path)

    scenario = generate(config)
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, 1)))
    outcome = propagate(scenario, rng)

    n_total = config.n_nodes + 1
    ratio = len(outcome.implicated) / n_total
    print(f"scenario: N={config.n_nodes} side={config.square_side:g} m "
          f"r={config.radius:g} m theta={math.degrees(config.theta):g} deg "
          f"d={config.sd_distance:g} m seed={config.seed}")
    if outcome.success:
        print(f"result: delivered, first delivery at hop {outcome.first_delivery_hop}")
    else:
        print("result: transmission failure (no remaining relays)")
    print(f"implicated: {len(outcome.implicated)} of {n_total} "
          f"(ratio {ratio:.6g}); covered receivers: {len(outcome.covered)}")
    print(f"rounds: {outcome.rounds}; per-round transmitters: "
          f"{', '.join(str(c) for c in outcome.per_round_transmitters)}")

    record = {
        "config": {
            "square_side": config.square_side,
            "n_nodes": config.n_nodes,
            "radius": config.radius,
            "theta_deg": math.degrees(config.theta),
            "d": config.sd_distance,
            "seed": config.seed,
            "placement": config.placement.value,
            "direction_error_deg": math.degrees(config.direction_error_bound),
        },
        "outcome": {
            "success": outcome.success,
            "first_delivery_hop": outcome.first_delivery_hop,
            "implicated_count": len(outcome.implicated),
            "covered_count": len(outcome.covered),
            "implicated_ratio": ratio,
            "rounds": outcome.rounds,
            "per_round_transmitters": list(outcome.per_round_transmitters),
        },
    }
    atomic_write_text(out_path, json.dumps(record, indent=2, sort_keys=True) + "\n")
    print(f"record written to {out_path}")
    return EXIT_OK


def _run_grid(manifest: RunManifest, spec: SweepSpec) -> int:
    out_path = _resolve_out(manifest)
    ensure_writable(out_path)
    t0 = time.perf_counter()
    results = run_sweep(spec, workers=manifest.workers)
    elapsed = time.perf_counter() - t0
    atomic_write_text(out_path, configio.results_csv_text(results, spec.base, spec))
    print(f"{len(results)} cells x {spec.trials} trials in {elapsed:.1f} s "
          f"-> {out_path}")
    errors = [abs(r.model_relative_error) for r in results
              if r.model_relative_error is not None]
    if errors:
        print(f"max |model relative error| over {len(errors)} "
              f"model-eligible cells: {max(errors):.4f}")
    return EXIT_OK


def cmd_sweep(manifest: RunManifest) -> int:
    _, spec = _load(manifest)
    return _run_grid(manifest, spec)


def cmd_compare(manifest: RunManifest) -> int:
    config, spec = _load(manifest)
    spec = replace(spec, d_values=(config.sd_distance,))
    return _run_grid(manifest, spec)


def cmd_model(manifest: RunManifest) -> int:
    config, _ = _load(manifest)
    out_path = _resolve_out(manifest)  # only written when --out was given
    if out_path is not None:
        ensure_writable(out_path)

    lines = [
        f"r = {config.radius:g} m, theta = {math.degrees(config.theta):g} deg, "
        f"d = {config.sd_distance:g} m, field side = {config.square_side:g} m",
    ]
    try:
        model = build_leaf(config.sd_distance, config.radius, config.theta)
    except DegenerateLeafError:
        lines += [
            "degenerate case: d <= r, destination reachable in one hop",
            "triangles per side: 0",
            "total area: 0 m^2",
            "predicted implicated ratio: 0",
        ]
    else:
        lines.append("edge lengths d_i (m): "
                     + ", ".join(f"{v:.6f}" for v in model.d_seq))
        lines.append("triangle areas (m^2): "
                     + ", ".join(f"{v:.6f}" for v in model.areas))
        lines.append(f"triangles per side: {model.n_triangles}")
        if model.non_terminating:
            lines.append("note: edge recurrence cannot fall below r "
                         "(fixed point beyond r); chain truncated at convergence")
        lines.append(f"total area: {model.total_area:.6f} m^2")
        lines.append("predicted implicated ratio: "
                     f"{predicted_ratio(model, config.square_side):.9g}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if out_path is not None:
        atomic_write_text(out_path, text)
    return EXIT_OK


def cmd_snapshot(manifest: RunManifest) -> int:
    config, _ = _load(manifest)
    out_path = _resolve_out(manifest)
    ensure_writable(out_path)
    scenario = generate(config)
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, 1)))
    outcome = propagate(scenario, rng)
    atomic_write_text(out_path, render_svg(scenario, outcome))
    print(f"snapshot written to {out_path} "
          f"(success={outcome.success}, implicated={len(outcome.implicated)})")
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "model": cmd_model,
    "compare": cmd_compare,
    "snapshot": cmd_snapshot,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    manifest = RunManifest(
        command=args.command,
        config_path=args.config,
        overrides=tuple(args.overrides),
        output_path=args.out,
        seed=args.seed,
        workers=max(1, args.workers),
    )
    try:
        return _COMMANDS[manifest.command](manifest)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
