"""Run configuration: one JSON schema for every command.

A config is a JSON object with these keys (unknown keys are rejected):

    command   "spectrum" | "sweep" | "disorder" | "scaling" | "validate"
    units     "phase" | "lambda0"   (required; lambda0 lengths are
              multiplied by 2*pi on load, phase values pass through)
    name      optional run name, used as the output file prefix
    seeds     list of seed objects (all commands except scaling):
                {"generator": "dimer", "spacing": x}
                {"generator": "periodic", "count": n, "spacing": x}
                {"positions": [x0, x1, ...]}
    sweep     {"seed": i, "start": a, "stop": b, "points": n}
              (sweep/disorder only; seed i must be a generator seed whose
              spacing is replaced by the grid value)
    physical  {"omega0": w, "gamma1d": g}, optional, defaults {0, 1}
    disorder  {"strength": r, "seed": s, "samples": m} (disorder only)
    scaling   {"spacing": d, "sizes": [...], "rank_count": k,
               "rank_size": n} (scaling only)
    profile_at  list of swept values to record intensity profiles at
                (sweep only), plus "auto_profile": true to also record
                profiles at detected resonances

Passing a manifest produced by a previous run re-parses the embedded
config, so any output is re-runnable as-is.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import DisorderSpec, SeedSpec
from .hamiltonian import PhysicalParams

__all__ = ["RunConfig", "ConfigError", "parse_config", "parse_config_file", "serialize_config"]

COMMANDS = ("spectrum", "sweep", "disorder", "scaling", "validate")
UNITS = ("phase", "lambda0")

_TOP_KEYS = {
    "command", "units", "name", "seeds", "sweep", "physical",
    "disorder", "scaling", "profile_at", "auto_profile",
}
_SEED_KEYS = {"generator", "spacing", "count", "positions"}
_SWEEP_KEYS = {"seed", "start", "stop", "points"}
_PHYSICAL_KEYS = {"omega0", "gamma1d"}
_DISORDER_KEYS = {"strength", "seed", "samples"}
_SCALING_KEYS = {"spacing", "sizes", "rank_count", "rank_size"}


class ConfigError(ValueError):
    """Malformed or contradictory run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Validated run description; all lengths already converted to phase."""

    command: str
    units: str
    name: str
    seeds: tuple[SeedSpec, ...] = ()
    sweep_seed: int | None = None
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_points: int | None = None
    params: PhysicalParams = PhysicalParams()
    disorder: DisorderSpec | None = None
    scaling_spacing: float | None = None
    scaling_sizes: tuple[int, ...] = ()
    scaling_rank_count: int = 5
    scaling_rank_size: int | None = None
    profile_at: tuple[float, ...] = ()
    auto_profile: bool = False
    raw: dict = field(default_factory=dict, compare=False)


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {', '.join(unknown)}")


def _number(obj: dict, key: str, where: str, scale: float = 1.0) -> float:
    if key not in obj:
        raise ConfigError(f"{where} is missing required key '{key}'")
    value = obj[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}.{key} must be finite")
    return float(value) * scale


def _parse_seed(obj, index: int, scale: float) -> SeedSpec:
    where = f"seeds[{index}]"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    _reject_unknown(obj, _SEED_KEYS, where)
    if "positions" in obj:
        if "generator" in obj or "count" in obj or "spacing" in obj:
            raise ConfigError(f"{where}: positions and generator are exclusive")
        pos = obj["positions"]
        if not isinstance(pos, list) or not pos:
            raise ConfigError(f"{where}.positions must be a non-empty list")
        return SeedSpec("explicit", positions=tuple(float(p) * scale for p in pos))
    gen = obj.get("generator")
    if gen not in ("dimer", "periodic"):
        raise ConfigError(f"{where}: generator must be 'dimer' or 'periodic'")
    spacing = _number(obj, "spacing", where, scale) if "spacing" in obj else None
    if gen == "dimer":
        if "count" in obj:
            raise ConfigError(f"{where}: dimer takes no count")
        return SeedSpec("dimer", spacing=0.0 if spacing is None else spacing)
    count = obj.get("count")
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ConfigError(f"{where}: periodic needs integer count >= 1")
    return SeedSpec(
        "periodic", spacing=0.0 if spacing is None else spacing, count=count
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run config (or a manifest embedding one)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if _is_manifest(data):
        # a manifest from a previous run; re-run its embedded config
        data = data["config"]
    return _validate(data)


def _is_manifest(data: dict) -> bool:
    return (
        "files" in data
        and isinstance(data.get("config"), dict)
        and "command" in data["config"]
    )


def parse_config_file(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _validate(data: dict) -> RunConfig:
    _reject_unknown(data, _TOP_KEYS, "config")

    command = data.get("command")
    if command not in COMMANDS:
        raise ConfigError(
            f"command must be one of {', '.join(COMMANDS)}, got {command!r}"
        )
    units = data.get("units")
    if units is None:
        raise ConfigError(
            "config must declare units ('phase' or 'lambda0'); there is no default"
        )
    if units not in UNITS:
        raise ConfigError(f"units must be 'phase' or 'lambda0', got {units!r}")
    scale = 1.0 if units == "phase" else 2.0 * math.pi

    name = data.get("name", command)
    if not isinstance(name, str) or not name:
        raise ConfigError("name must be a non-empty string")

    physical = data.get("physical", {})
    if not isinstance(physical, dict):
        raise ConfigError("physical must be an object")
    _reject_unknown(physical, _PHYSICAL_KEYS, "physical")
    try:
        params = PhysicalParams(
            omega0=float(physical.get("omega0", 0.0)),
            gamma1d=float(physical.get("gamma1d", 1.0)),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err

    seeds: tuple[SeedSpec, ...] = ()
    if command == "scaling":
        if "seeds" in data:
            raise ConfigError("scaling runs take a 'scaling' section, not seeds")
    else:
        raw_seeds = data.get("seeds")
        if not isinstance(raw_seeds, list) or not raw_seeds:
            raise ConfigError(f"{command} runs require a non-empty seeds list")
        try:
            seeds = tuple(
                _parse_seed(s, i, scale) for i, s in enumerate(raw_seeds)
            )
        except ValueError as err:
            raise ConfigError(str(err)) from err

    cfg = dict(
        command=command, units=units, name=name, seeds=seeds, params=params, raw=data
    )

    if command in ("sweep", "disorder"):
        sweep = data.get("sweep")
        if not isinstance(sweep, dict):
            raise ConfigError(f"{command} runs require a sweep section")
        _reject_unknown(sweep, _SWEEP_KEYS, "sweep")
        idx = sweep.get("seed")
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise ConfigError("sweep.seed must be an integer seed index")
        if not 0 <= idx < len(seeds):
            raise ConfigError(f"sweep.seed {idx} out of range for {len(seeds)} seeds")
        if seeds[idx].kind == "explicit":
            raise ConfigError("sweep.seed must point at a generator seed")
        start = _number(sweep, "start", "sweep", scale)
        stop = _number(sweep, "stop", "sweep", scale)
        points = sweep.get("points")
        if not isinstance(points, int) or isinstance(points, bool) or points < 2:
            raise ConfigError("sweep.points must be an integer >= 2")
        if not start < stop:
            raise ConfigError(
                f"sweep grid is contradictory: start {start} must be < stop {stop}"
            )
        cfg.update(
            sweep_seed=idx, sweep_start=start, sweep_stop=stop, sweep_points=points
        )
    elif "sweep" in data:
        raise ConfigError(f"{command} runs take no sweep section")

    if command == "disorder":
        dis = data.get("disorder")
        if not isinstance(dis, dict):
            raise ConfigError("disorder runs require a disorder section")
        _reject_unknown(dis, _DISORDER_KEYS, "disorder")
        strength = _number(dis, "strength", "disorder", scale)
        rng_seed = dis.get("seed", 0)
        if not isinstance(rng_seed, int) or isinstance(rng_seed, bool):
            raise ConfigError("disorder.seed must be an integer")
        samples = dis.get("samples", 200)
        if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
            raise ConfigError("disorder.samples must be an integer >= 1")
        try:
            cfg["disorder"] = DisorderSpec(strength, rng_seed, samples)
        except ValueError as err:
            raise ConfigError(str(err)) from err
    elif "disorder" in data:
        raise ConfigError(f"{command} runs take no disorder section")

    if command == "scaling":
        sc = data.get("scaling")
        if not isinstance(sc, dict):
            raise ConfigError("scaling runs require a scaling section")
        _reject_unknown(sc, _SCALING_KEYS, "scaling")
        spacing = _number(sc, "spacing", "scaling", scale)
        sizes = sc.get("sizes")
        if (
            not isinstance(sizes, list)
            or len(sizes) < 1
            or not all(isinstance(n, int) and not isinstance(n, bool) for n in sizes)
        ):
            raise ConfigError("scaling.sizes must be a list of integers")
        rank_count = sc.get("rank_count", 5)
        rank_size = sc.get("rank_size")
        if rank_size is not None and not isinstance(rank_size, int):
            raise ConfigError("scaling.rank_size must be an integer")
        cfg.update(
            scaling_spacing=spacing,
            scaling_sizes=tuple(sizes),
            scaling_rank_count=int(rank_count),
            scaling_rank_size=rank_size,
        )
    elif "scaling" in data:
        raise ConfigError(f"{command} runs take no scaling section")

    if "profile_at" in data:
        if command != "sweep":
            raise ConfigError("profile_at only applies to sweep runs")
        pa = data["profile_at"]
        if not isinstance(pa, list):
            raise ConfigError("profile_at must be a list of numbers")
        cfg["profile_at"] = tuple(float(v) * scale for v in pa)
    if "auto_profile" in data:
        if command != "sweep":
            raise ConfigError("auto_profile only applies to sweep runs")
        if not isinstance(data["auto_profile"], bool):
            raise ConfigError("auto_profile must be true or false")
        cfg["auto_profile"] = data["auto_profile"]

    if command == "validate" and len(seeds) != 2:
        raise ConfigError("validate runs need exactly 2 seeds (a 2-level nesting)")

    return RunConfig(**cfg)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical JSON for a config; parse(serialize(cfg)) equals cfg."""
    return json.dumps(cfg.raw, indent=2, sort_keys=True)
