#!/usr/bin/env python3
"""Regenerate the sweep CSVs (bandwidth staircase and power comparison)
plus the bundled ring-8 scenario summary into out/."""

from pathlib import Path

from cryoqaoa.cli import main

OUT = Path(__file__).resolve().parent.parent / "out"
SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    main(["fig5a", "--out", str(OUT / "fig5a_staircase.csv")])
    main(["fig5b", "--n-max", "4096", "--out", str(OUT / "fig5b_power.csv")])
    main(
        [
            "run",
            "--config",
            str(SCENARIOS / "maxcut-ring8.scenario"),
            "--out",
            str(OUT / "ring8_summary.txt"),
            "--trace",
            str(OUT / "ring8_trace.csv"),
        ]
    )
    print(f"wrote CSVs under {OUT}")
