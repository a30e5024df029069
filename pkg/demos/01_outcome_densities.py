#!/usr/bin/env python3
"""Outcome densities of the three intensity-detection schemes.

Walks through the basic objects: photon statistics of a state, the
random-phase homodyne (roulette) quadrature density, its push-forward to the
unbiased intensity variable y = 2 x^2 - 1/(2 eta), the heterodyne intensity
density, and the direct-detection counting law.  Everything is checked
against quadrature normalization on the spot.
"""

import numpy as np

from qroulette import (
    StateSpec,
    direct_detection_pmf,
    heterodyne_density_I,
    integrate,
    photon_distribution,
    roulette_density_x,
    roulette_density_y,
)

STATES = [
    StateSpec.vacuum(),
    StateSpec.coherent(1.0),
    StateSpec.fock(2),
    StateSpec.squeezed(2.0, 0.5),
]
ETAS = (1.0, 0.5)


def show_state(spec, eta):
    stats = photon_distribution(spec)
    print(f"--- {spec.describe()}  (eta = {eta}) ---")
    print(f"  photon distribution truncated at n_max = {stats.n_max}")

    norm = integrate(lambda x: roulette_density_x(stats, x, eta), -12.0, 12.0, 1e-9)
    print(f"  roulette x-density normalization: {norm:.12f}")

    xs = np.array([0.0, 0.5, 1.0, 2.0])
    print("  x:      ", "  ".join(f"{x:7.3f}" for x in xs))
    print("  p(x):   ", "  ".join(f"{v:7.4f}" for v in roulette_density_x(stats, xs, eta)))

    floor = -0.5 / eta
    ys = floor + np.array([0.05, 0.5, 1.5, 3.0])
    print("  y:      ", "  ".join(f"{y:7.3f}" for y in ys))
    print("  p(y):   ", "  ".join(f"{v:7.4f}" for v in roulette_density_y(stats, ys, eta)))

    intensities = -1.0 / eta + np.array([0.05, 1.0, 2.5, 5.0])
    print("  I:      ", "  ".join(f"{v:7.3f}" for v in intensities))
    print("  p(I):   ", "  ".join(f"{v:7.4f}" for v in heterodyne_density_I(stats, intensities, eta)))

    pmf = direct_detection_pmf(stats, eta)
    head = min(len(pmf), 6)
    print("  direct counts p(m), m = 0..{}: {}".format(
        head - 1, "  ".join(f"{v:.4f}" for v in pmf[:head])
    ))
    print()


def main():
    for eta in ETAS:
        for spec in STATES:
            show_state(spec, eta)


if __name__ == "__main__":
    main()
