"""Stable on-disk result formats.

CSV files are UTF-8 with '\\n' line endings, a mandatory header row, and
numeric fields printed with 17 significant digits so they round-trip
exactly.  Every run also writes a JSON manifest embedding the exact
config, the package version and the emitted files, so any output
directory is self-describing and re-runnable (`nestqed --config
manifest.json` reproduces it byte-identically).

Schemas:
    sweep.csv     sweep_value, mode_rank, re_omega, im_omega
    profiles.csv  sweep_value, mode_rank, atom_index, copy_index,
                  position, intensity
    disorder.csv  sweep_value, mean_min_decay, stderr, min, max, M, r_d,
                  rng_seed
    spectrum.csv  mode_rank, re_omega, im_omega, decay, detuning,
                  participation_ratio
    scaling.csv   kind (size|rank), x, decay
    validate      JSON only: the three block-equivalence residuals
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .experiments import (
    BlockEquivalenceReport,
    DisorderStats,
    Resonance,
    ScalingResult,
    SweepResult,
)
from .spectral import SpectralDecomposition, mode_metrics

__all__ = ["write_results", "OutputError"]

FORMATS = ("csv", "json", "both")


class OutputError(OSError):
    """I/O failure, annotated with the offending path."""


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as err:
        raise OutputError(f"cannot write {path}: {err}") from err


def _csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _sweep_rows(result: SweepResult):
    for g, value in enumerate(result.values):
        for rank, omega in enumerate(result.eigenvalues[g]):
            yield (_fmt(value), str(rank), _fmt(omega.real), _fmt(omega.imag))


def _profile_rows(result: SweepResult):
    for g in sorted(result.profiles):
        value = result.values[g]
        profile = result.profiles[g]
        pos = result.positions[g]
        copies = result.copy_indices[g]
        for rank in range(profile.shape[0]):
            for atom in range(profile.shape[1]):
                yield (
                    _fmt(value),
                    str(rank),
                    str(atom),
                    str(int(copies[atom])),
                    _fmt(pos[atom]),
                    _fmt(profile[rank, atom]),
                )


def _disorder_rows(stats: DisorderStats):
    for g, value in enumerate(stats.values):
        yield (
            _fmt(value),
            _fmt(stats.mean[g]),
            _fmt(stats.stderr[g]),
            _fmt(stats.minimum[g]),
            _fmt(stats.maximum[g]),
            str(stats.spec.samples),
            _fmt(stats.spec.strength),
            str(stats.spec.seed),
        )


def _spectrum_rows(dec: SpectralDecomposition):
    for rank in range(dec.n_modes):
        m = mode_metrics(dec, rank)
        omega = dec.eigenvalues[rank]
        yield (
            str(rank),
            _fmt(omega.real),
            _fmt(omega.imag),
            _fmt(m.decay),
            _fmt(m.detuning),
            _fmt(m.participation_ratio),
        )


def _scaling_rows(res: ScalingResult):
    for n, d in zip(res.sizes, res.decays):
        yield ("size", str(int(n)), _fmt(d))
    for xi, d in zip(res.ranks, res.rank_decays):
        yield ("rank", str(int(xi)), _fmt(d))


def _resonance_record(r: Resonance) -> dict:
    return {
        "location": r.location,
        "decay": r.decay,
        "width": r.width,
        "refined": r.refined,
        "grid_index": r.grid_index,
    }


def write_results(
    result,
    out_dir: str | Path,
    fmt: str = "csv",
    config: RunConfig | None = None,
    resonances: list[Resonance] | None = None,
) -> dict[str, str]:
    """Write a run result to out_dir; returns the manifest file map.

    ``result`` may be a SweepResult, DisorderStats, SpectralDecomposition,
    ScalingResult or BlockEquivalenceReport; the matching schema is chosen
    by type.  ``fmt`` is csv, json or both (validate reports are always
    JSON).
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise OutputError(f"cannot create output directory {out}: {err}") from err

    name = config.name if config is not None else "run"
    files: dict[str, str] = {}
    extra: dict = {}

    def emit_csv(key: str, stem: str, header: list[str], rows) -> None:
        if fmt in ("csv", "both"):
            path = out / f"{name}_{stem}.csv"
            _csv(path, header, rows)
            files[key] = path.name

    def emit_json(payload: dict) -> None:
        if fmt in ("json", "both"):
            path = out / f"{name}_data.json"
            _write_text(path, json.dumps(payload, indent=2) + "\n")
            files["data_json"] = path.name

    if isinstance(result, SweepResult):
        emit_csv(
            "sweep_csv", "sweep",
            ["sweep_value", "mode_rank", "re_omega", "im_omega"],
            _sweep_rows(result),
        )
        if result.profiles:
            emit_csv(
                "profiles_csv", "profiles",
                ["sweep_value", "mode_rank", "atom_index", "copy_index",
                 "position", "intensity"],
                _profile_rows(result),
            )
        extra["regime_boundary"] = result.regime_boundary
        if resonances is not None:
            extra["resonances"] = [_resonance_record(r) for r in resonances]
        emit_json(
            {
                "values": result.values.tolist(),
                "eigenvalues_re": result.eigenvalues.real.tolist(),
                "eigenvalues_im": result.eigenvalues.imag.tolist(),
                "darkest_decay": result.darkest_decay.tolist(),
                "overlapping": result.overlapping.tolist(),
            }
        )
    elif isinstance(result, DisorderStats):
        emit_csv(
            "disorder_csv", "disorder",
            ["sweep_value", "mean_min_decay", "stderr", "min", "max",
             "M", "r_d", "rng_seed"],
            _disorder_rows(result),
        )
        emit_json(
            {
                "values": result.values.tolist(),
                "mean": result.mean.tolist(),
                "stderr": result.stderr.tolist(),
                "min": result.minimum.tolist(),
                "max": result.maximum.tolist(),
            }
        )
    elif isinstance(result, SpectralDecomposition):
        emit_csv(
            "spectrum_csv", "spectrum",
            ["mode_rank", "re_omega", "im_omega", "decay", "detuning",
             "participation_ratio"],
            _spectrum_rows(result),
        )
        emit_json(
            {
                "eigenvalues_re": result.eigenvalues.real.tolist(),
                "eigenvalues_im": result.eigenvalues.imag.tolist(),
                "ortho_residual": result.ortho_residual,
                "eig_residual": result.eig_residual,
            }
        )
    elif isinstance(result, ScalingResult):
        emit_csv("scaling_csv", "scaling", ["kind", "x", "decay"], _scaling_rows(result))
        extra["size_exponent"] = result.size_exponent
        extra["rank_exponent"] = result.rank_exponent
        extra["rank_size"] = result.rank_size
        emit_json(
            {
                "sizes": result.sizes.tolist(),
                "decays": result.decays.tolist(),
                "size_exponent": result.size_exponent,
                "ranks": result.ranks.tolist(),
                "rank_decays": result.rank_decays.tolist(),
                "rank_exponent": result.rank_exponent,
            }
        )
    elif isinstance(result, BlockEquivalenceReport):
        payload = {
            "dense_vs_blocks": result.dense_vs_blocks,
            "dense_vs_eigenbasis": result.dense_vs_eigenbasis,
            "eigenvalue_deviation": (
                None
                if np.isnan(result.eigenvalue_deviation)
                else result.eigenvalue_deviation
            ),
            "eigenbasis_skipped": result.eigenbasis_skipped,
        }
        path = out / f"{name}_validate.json"
        _write_text(path, json.dumps(payload, indent=2) + "\n")
        files["validate_json"] = path.name
        extra.update(payload)
    else:
        raise TypeError(f"no writer for result type {type(result).__name__}")

    manifest = {
        "version": __version__,
        "command": config.command if config is not None else None,
        "config": config.raw if config is not None else None,
        "files": files,
        "checksums": {
            fname: hashlib.sha256((out / fname).read_bytes()).hexdigest()
            for fname in sorted(files.values())
        },
    }
    manifest.update(extra)
    manifest_path = out / f"{name}_manifest.json"
    _write_text(manifest_path, json.dumps(manifest, indent=2) + "\n")
    files["manifest"] = manifest_path.name
    return files
