#!/usr/bin/env python3
"""Render a figure analogue from run manifests and their CSV tables.

    python3 render_fig.py --spec figspecs/fig2.json

A figure spec is a JSON object:

    {
      "figure": "fig2",             # identifier, used in the title
      "kind": "spectrum",           # "spectrum" (sweep run) or "disorder"
      "manifests": ["data/fig2/fig2_manifest.json"],
      "output": "out/fig2.svg",     # vector formats (svg/pdf) expected
      "labels": ["r_d = 0", ...]    # optional, one per manifest
    }

Spectrum figures take exactly one sweep manifest and draw real and
imaginary eigenvalue panels versus the swept spacing (decay axis
logarithmic), with intensity-profile insets at the spacings recorded in
the run's profiles table.  Disorder figures overlay the mean
darkest-decay curves of several disorder manifests on a log axis.

Every plotted point corresponds to exactly one CSV row; nothing is
smoothed, resampled or interpolated.  This script reads only the files
named by the manifests; it does not import the library that wrote them.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

KINDS = ("spectrum", "disorder")
SWEEP_COLUMNS = ["sweep_value", "mode_rank", "re_omega", "im_omega"]
PROFILE_COLUMNS = [
    "sweep_value", "mode_rank", "atom_index", "copy_index", "position", "intensity",
]
DISORDER_COLUMNS = [
    "sweep_value", "mean_min_decay", "stderr", "min", "max", "M", "r_d", "rng_seed",
]

DECAY_FLOOR = 1e-17  # display floor for log axes; machine zeros plot here


class FigureError(ValueError):
    """Bad figure spec or input files that do not match the schemas."""


def read_spec(path: Path) -> dict:
    try:
        spec = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise FigureError(f"cannot read figure spec {path}: {err}") from err
    for key in ("figure", "kind", "manifests", "output"):
        if key not in spec:
            raise FigureError(f"figure spec is missing '{key}'")
    if spec["kind"] not in KINDS:
        raise FigureError(f"kind must be one of {KINDS}, got {spec['kind']!r}")
    if not isinstance(spec["manifests"], list) or not spec["manifests"]:
        raise FigureError("figure spec needs a non-empty manifest list")
    if spec["kind"] == "spectrum" and len(spec["manifests"]) != 1:
        raise FigureError("spectrum figures take exactly one manifest")
    return spec


def load_manifest(path: Path, expected_command: str) -> dict:
    if not path.exists():
        raise FigureError(f"manifest does not exist: {path}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise FigureError(f"cannot read manifest {path}: {err}") from err
    command = manifest.get("command")
    if command != expected_command:
        raise FigureError(
            f"manifest {path} declares command {command!r}, "
            f"this figure needs a {expected_command!r} run"
        )
    manifest["_dir"] = path.parent
    return manifest


def read_table(path: Path, columns: list[str]) -> list[dict]:
    if not path.exists():
        raise FigureError(f"data file does not exist: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in columns:
            if col not in header:
                raise FigureError(f"{path} is missing column '{col}'")
        extra = [c for c in header if c not in columns]
        if extra:
            raise FigureError(f"{path} has unexpected column '{extra[0]}'")
        rows = list(reader)
    if not rows:
        raise FigureError(f"{path} contains a header but no data rows")
    return rows


def data_file(manifest: dict, key: str) -> Path:
    files = manifest.get("files", {})
    if key not in files:
        raise FigureError(f"manifest does not list a '{key}' file")
    return manifest["_dir"] / files[key]


def floored(values):
    return [max(v, DECAY_FLOOR) for v in values]


def render_spectrum(spec: dict, spec_dir: Path) -> dict:
    manifest = load_manifest(spec_dir / spec["manifests"][0], "sweep")
    rows = read_table(data_file(manifest, "sweep_csv"), SWEEP_COLUMNS)

    values = [float(r["sweep_value"]) for r in rows]
    re_parts = [float(r["re_omega"]) for r in rows]
    decays = floored([-float(r["im_omega"]) for r in rows])

    fig, (ax_re, ax_im) = plt.subplots(
        2, 1, figsize=(7.0, 7.5), sharex=True, constrained_layout=True
    )
    dot = dict(s=2.5, c="#1f4e79", alpha=0.8, linewidths=0)
    ax_re.scatter(values, re_parts, **dot)
    ax_im.scatter(values, decays, **dot)
    ax_im.set_yscale("log")
    ax_re.set_ylabel(r"Re$[E]$ / $\gamma_{1D}$")
    ax_im.set_ylabel(r"$-$Im$[E]$ / $\gamma_{1D}$")
    ax_im.set_xlabel(r"copy separation $d_B$ (phase, rad)")
    ax_re.set_title(f"{spec['figure']}: eigenvalues vs swept spacing")

    points = 2 * len(rows)

    # intensity-profile insets at the spacings flagged in the run
    inset_points = 0
    if "profiles_csv" in manifest.get("files", {}):
        profile_rows = read_table(data_file(manifest, "profiles_csv"), PROFILE_COLUMNS)
        by_value: dict[float, list[dict]] = {}
        for row in profile_rows:
            by_value.setdefault(float(row["sweep_value"]), []).append(row)
        flagged = sorted(by_value)
        width = min(0.22, 0.9 / max(len(flagged), 1))
        for i, value in enumerate(flagged):
            darkest = [r for r in by_value[value] if r["mode_rank"] == "0"]
            inset = ax_re.inset_axes([0.05 + i * (width + 0.03), 0.62, width, 0.33])
            # copy duplicates are offset vertically for visibility only
            for row in darkest:
                offset = 0.06 * int(row["copy_index"])
                inset.plot(
                    float(row["position"]),
                    float(row["intensity"]) + offset,
                    "o",
                    ms=2.5,
                    c="#b3421b",
                )
                inset_points += 1
            inset.set_title(f"$d_B$={value:.3g}", fontsize=6, pad=1)
            inset.tick_params(labelsize=5, length=1.5)
    return {"figure": fig, "points": points + inset_points, "rows": len(rows)}


def render_disorder(spec: dict, spec_dir: Path) -> dict:
    fig, ax = plt.subplots(figsize=(7.0, 4.8), constrained_layout=True)
    labels = spec.get("labels") or []
    points = rows_total = 0
    for i, rel in enumerate(spec["manifests"]):
        manifest = load_manifest(spec_dir / rel, "disorder")
        rows = read_table(data_file(manifest, "disorder_csv"), DISORDER_COLUMNS)
        values = [float(r["sweep_value"]) for r in rows]
        mean = floored([float(r["mean_min_decay"]) for r in rows])
        label = labels[i] if i < len(labels) else f"$r_d$ = {rows[0]['r_d']}"
        ax.plot(values, mean, lw=0.9, marker=".", ms=1.8, label=label)
        points += len(rows)
        rows_total += len(rows)
    ax.set_yscale("log")
    ax.set_xlabel(r"copy separation $d_B$ (phase, rad)")
    ax.set_ylabel(r"mean darkest $-$Im$[E]$ / $\gamma_{1D}$")
    ax.set_title(f"{spec['figure']}: disorder-averaged darkest decay")
    ax.legend(fontsize=8)
    return {"figure": fig, "points": points, "rows": rows_total}


def render(spec_path: Path) -> dict:
    """Render one figure spec; returns {output, points, rows}."""
    spec = read_spec(spec_path)
    spec_dir = spec_path.parent
    if spec["kind"] == "spectrum":
        result = render_spectrum(spec, spec_dir)
    else:
        result = render_disorder(spec, spec_dir)
    out_path = spec_dir / spec["output"]
    out_path.parent.mkdir(parents=True, exist_ok=True)
    result["figure"].savefig(out_path)
    plt.close(result["figure"])
    return {"output": str(out_path), "points": result["points"], "rows": result["rows"]}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spec", required=True, help="figure spec JSON")
    args = parser.parse_args(argv)
    try:
        summary = render(Path(args.spec))
    except FigureError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {summary['output']} ({summary['points']} plotted points "
          f"from {summary['rows']} CSV rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
