#!/usr/bin/env python
"""Run every example config in configs/ and print report paths and status."""

from __future__ import annotations

import pathlib
import sys

from glscalc import cli

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main() -> int:
    out_dir = ROOT / "reports"
    worst = 0
    for config in sorted((ROOT / "configs").glob("*.toml")):
        status = cli.main(["--config", str(config), "--out", str(out_dir)])
        print(f"{config.name}: exit {status}")
        worst = max(worst, status)
    print(f"reports written to {out_dir}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
