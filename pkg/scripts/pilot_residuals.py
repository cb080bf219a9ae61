"""Pilot run for the comparison-residual envelope.

Runs nested paths at p = 1/2 over the pilot seed range and writes the raw
per-record residuals plus their summary to tests/fixtures/residual_pilot.json.
The verification test reads the frozen thresholds from that file and uses a
disjoint seed range.

    python scripts/pilot_residuals.py
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from lilperm.lil import ExperimentConfig, residual_summary, run_path

DIMS = (10, 14, 18, 22, 26, 28)
PILOT_SEEDS = range(0, 50)
VERIFY_SEEDS = range(1000, 1050)
R_STAR_FACTOR = 1.25
SLOPE_BAND_SIGMAS = 3.0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests/fixtures/residual_pilot.json")
    args = ap.parse_args(argv)

    t0 = time.time()
    points = []
    for seed in PILOT_SEEDS:
        for rec in run_path(ExperimentConfig(seed, 0.5, DIMS)):
            if rec.residual is not None:
                points.append((seed, rec.n, rec.residual))
        print(f"seed {seed} done ({time.time() - t0:.0f}s)", flush=True)
    summary = residual_summary((n, r) for _, n, r in points)
    frozen = {
        "p": 0.5,
        "dims": list(DIMS),
        "pilot_seeds": [PILOT_SEEDS.start, PILOT_SEEDS.stop],
        "verify_seeds": [VERIFY_SEEDS.start, VERIFY_SEEDS.stop],
        "pilot_max_abs_residual": summary.max_abs,
        "pilot_slope": summary.slope,
        "pilot_slope_stderr": summary.slope_stderr,
        "r_star_factor": R_STAR_FACTOR,
        "r_star": R_STAR_FACTOR * summary.max_abs,
        "slope_band_sigmas": SLOPE_BAND_SIGMAS,
        "points": [{"seed": s, "n": n, "residual": r} for s, n, r in points],
    }
    args.out.write_text(json.dumps(frozen, indent=1) + "\n")
    print(json.dumps({k: v for k, v in frozen.items() if k != "points"}, indent=1))


if __name__ == "__main__":
    main()
