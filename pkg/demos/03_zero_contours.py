#!/usr/bin/env python3
"""Zero contours of the roulette/heterodyne gap for squeezed states.

For each quantum efficiency the contour where the two schemes perform
equally is traced in the (N, beta) plane (N total mean photons, beta the
squeezing photon fraction).  States to the left of a contour are measured
more precisely by the roulette; the region grows as the efficiency drops.
Writes the five standard curves to zero_contours.csv next to this script.
"""

import csv
from pathlib import Path

from qroulette import zero_line

ETAS = (1.0, 0.75, 0.5, 0.25, 0.1)
OUTPUT = Path(__file__).resolve().parent / "zero_contours.csv"


def main():
    rows = []
    for eta in ETAS:
        points = zero_line(eta, n_points=160, n_max=12.0)
        found = [p for p in points if p.converged]
        intercept = [p for p in found if p.beta == 0.0]
        print(
            f"eta = {eta:4.2f}: {len(found):3d} contour points, "
            f"beta=0 intercept at N = {intercept[0].total_n:.6f}"
            if intercept
            else f"eta = {eta:4.2f}: {len(found):3d} contour points (intercept beyond range)"
        )
        for p in points:
            rows.append([f"{eta:.17g}", f"{p.total_n:.17g}", f"{p.beta:.17g}",
                         "true" if p.converged else "false"])

    with OUTPUT.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["eta", "N", "beta", "converged"])
        writer.writerows(rows)
    print(f"\nwrote {len(rows)} rows to {OUTPUT}")
    print("load the CSV and plot beta against N per eta to see the nested curves")


if __name__ == "__main__":
    main()
