#!/usr/bin/env python3
"""Render every shipped figure spec.

    python3 make_figures.py
"""

import sys
from pathlib import Path

import render_fig

HERE = Path(__file__).resolve().parent


def main() -> int:
    specs = sorted((HERE / "figspecs").glob("*.json"))
    if not specs:
        print("no figure specs found", file=sys.stderr)
        return 1
    failures = 0
    for spec in specs:
        try:
            summary = render_fig.render(spec)
        except render_fig.FigureError as err:
            print(f"{spec.name}: FAILED: {err}", file=sys.stderr)
            failures += 1
            continue
        print(f"{spec.name}: wrote {summary['output']} "
              f"({summary['points']} points from {summary['rows']} rows)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
