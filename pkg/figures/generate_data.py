#!/usr/bin/env python3
"""Regenerate the data behind the shipped figures by running the CLI.

Each config in ../configs that belongs to a figure is executed with its
output directed to data/<name>/.  The runs are deterministic, so this
reproduces the committed data byte for byte.

    python3 generate_data.py            # run everything that is missing
    python3 generate_data.py --force    # re-run everything
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
CONFIGS = sorted((HERE.parent / "configs").glob("fig*.json"))


def run_one(config: Path, force: bool) -> None:
    name = config.stem
    out_dir = HERE / "data" / name
    manifest = out_dir / f"{name}_manifest.json"
    if manifest.exists() and not force:
        print(f"  {name}: up to date")
        return
    print(f"  {name}: running...", flush=True)
    cmd = [
        sys.executable, "-m", "nestqed.cli",
        "--config", str(config),
        "--out", str(out_dir),
        "--format", "csv",
    ]
    subprocess.run(cmd, check=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--force", action="store_true")
    args = parser.parse_args(argv)
    if not CONFIGS:
        print("no figure configs found", file=sys.stderr)
        return 1
    print(f"generating data for {len(CONFIGS)} runs into {HERE / 'data'}")
    for config in CONFIGS:
        run_one(config, args.force)
    return 0


if __name__ == "__main__":
    sys.exit(main())
