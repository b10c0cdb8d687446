"""Command-line entry point.

    nestqed --config cfg.json [--out DIR] [--format csv|json|both]
            [--threads N] [--override key=value ...]

The command itself (spectrum, sweep, disorder, scaling, validate) comes
from the config file.  --override sets dotted config paths before
validation, e.g. --override sweep.points=100.  The default output
directory is $NESTQED_OUT, falling back to ./out.

Exit codes: 0 success, 1 config error, 2 numerical diagnostic failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, parse_config
from .experiments import (
    SweepConfig,
    find_resonances,
    run_disorder_ensemble,
    run_scaling_study,
    run_sweep,
    verify_block_equivalence,
)
from .geometry import nest
from .hamiltonian import build_dense
from .io import OutputError, write_results
from .spectral import NumericsError, eigendecompose

ENV_OUT = "NESTQED_OUT"


def _apply_override(data: dict, spec: str) -> None:
    if "=" not in spec:
        raise ConfigError(f"override {spec!r} is not of the form key=value")
    dotted, raw_value = spec.split("=", 1)
    keys = dotted.split(".")
    try:
        value = json.loads(raw_value)
    except json.JSONDecodeError:
        value = raw_value
    node = data
    for key in keys[:-1]:
        if key not in node or not isinstance(node[key], dict):
            node[key] = {}
        node = node[key]
    node[keys[-1]] = value


def _sweep_config(cfg: RunConfig) -> SweepConfig:
    return SweepConfig(
        seeds=cfg.seeds,
        swept=cfg.sweep_seed,
        start=cfg.sweep_start,
        stop=cfg.sweep_stop,
        points=cfg.sweep_points,
        params=cfg.params,
    )


def _run(cfg: RunConfig, out_dir: Path, fmt: str, threads: int) -> None:
    if cfg.command == "spectrum":
        dec = eigendecompose(build_dense(nest([s.build() for s in cfg.seeds]), cfg.params))
        write_results(dec, out_dir, fmt, cfg)
    elif cfg.command == "sweep":
        sweep_cfg = _sweep_config(cfg)
        result = run_sweep(sweep_cfg, profile_at=cfg.profile_at, threads=threads)
        resonances = find_resonances(result)
        if cfg.auto_profile and resonances:
            locs = tuple(r.location for r in resonances)
            result = run_sweep(
                sweep_cfg, profile_at=cfg.profile_at + locs, threads=threads
            )
        write_results(result, out_dir, fmt, cfg, resonances=resonances)
    elif cfg.command == "disorder":
        stats = run_disorder_ensemble(_sweep_config(cfg), cfg.disorder, threads=threads)
        write_results(stats, out_dir, fmt, cfg)
    elif cfg.command == "scaling":
        result = run_scaling_study(
            cfg.scaling_spacing,
            cfg.scaling_sizes,
            cfg.params,
            rank_count=cfg.scaling_rank_count,
            rank_size=cfg.scaling_rank_size,
        )
        write_results(result, out_dir, fmt, cfg)
    elif cfg.command == "validate":
        report = verify_block_equivalence(
            nest([s.build() for s in cfg.seeds]), cfg.params
        )
        write_results(report, out_dir, fmt, cfg)
    else:  # pragma: no cover - parse_config rejects unknown commands
        raise ConfigError(f"unhandled command {cfg.command!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nestqed",
        description="Spectra of nested waveguide-QED atom arrays",
    )
    parser.add_argument("--config", required=True, help="run config JSON (or a manifest)")
    parser.add_argument("--out", default=None, help=f"output directory (default ${ENV_OUT} or ./out)")
    parser.add_argument("--format", default="csv", choices=["csv", "json", "both"])
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="dotted-path config override, value parsed as JSON",
    )
    args = parser.parse_args(argv)

    out_dir = Path(args.out or os.environ.get(ENV_OUT, "out"))
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as err:
        print(f"error: cannot read config: {err}", file=sys.stderr)
        return 1

    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        from .config import _is_manifest

        if _is_manifest(data):
            data = data["config"]
        for spec in args.override:
            _apply_override(data, spec)
        cfg = parse_config(json.dumps(data))
    except (ConfigError, json.JSONDecodeError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1

    try:
        _run(cfg, out_dir, args.format, max(1, args.threads))
    except NumericsError as err:
        print(f"numerical diagnostic failure: {err}", file=sys.stderr)
        return 2
    except RuntimeError as err:
        cause = err.__cause__
        if isinstance(cause, NumericsError) or isinstance(err, NumericsError):
            print(f"numerical diagnostic failure: {err}", file=sys.stderr)
            return 2
        raise
    except (ConfigError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    except OutputError as err:
        print(f"output error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
