#!/usr/bin/env python3
"""Write the synthetic redwood slip-test CSVs shipped in data/.

Ten trees with per-tree friction spread to match the redwood library entry
(mean 0.38, std 0.04, range 0.336-0.466). Five wrap angles, five repeats each.
Every value here is synthetic.
"""

import argparse
import csv
import math
import random
from pathlib import Path

TREE_MU = [0.336, 0.466, 0.33975, 0.40975, 0.34975, 0.39975, 0.35975, 0.38975, 0.35475, 0.39475]
ANGLES_DEG = [90, 180, 270, 360, 450]
REPEATS = 5


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--noise", type=float, default=0.02, help="relative tension noise")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    meas_rows, base_rows = [], []
    for i, mu in enumerate(TREE_MU, start=1):
        tree = f"redwood_{i:02d}"
        t0 = rng.uniform(4.0, 8.0)
        for _ in range(REPEATS):
            base_rows.append((tree, f"{t0:.4f}"))
        for deg in ANGLES_DEG:
            for _ in range(REPEATS):
                t = t0 * math.exp(mu * math.radians(deg)) * rng.lognormvariate(0.0, args.noise)
                meas_rows.append((tree, deg, f"{t:.4f}"))

    with open(args.out_dir / "synthetic_redwood_measurements.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["object_id", "wrap_angle_deg", "slip_tension_N"])
        w.writerows(meas_rows)
    with open(args.out_dir / "synthetic_redwood_baselines.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["object_id", "peak_force_N"])
        w.writerows(base_rows)


if __name__ == "__main__":
    main()
