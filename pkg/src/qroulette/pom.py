"""Outcome probability densities of the three detection schemes.

Nonunit quantum efficiency eta enters as:
  * roulette (random-phase homodyne): Gaussian smearing of the quadrature
    outcome with variance (1 - eta)/(4 eta), evaluated in closed form
    through the equivalent Bernoulli-thinned state;
  * heterodyne: an added complex Gaussian with per-quadrature variance
    (1/eta - 1)/2 on top of unit-efficiency draws;
  * direct detection: Bernoulli thinning of the photon number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats
from scipy.special import gammaln

from .errors import ValidationError
from .estimators import intensity_estimator
from .numerics import gauss_legendre_grid, oscillator_mixture
from .states import PhotonStatistics, moments

__all__ = [
    "DetectorConfig",
    "SCHEMES",
    "direct_detection_pmf",
    "heterodyne_density_I",
    "heterodyne_outcome_moment",
    "roulette_density_x",
    "roulette_density_y",
    "roulette_outcome_moment",
    "thinned_distribution",
]

SCHEMES = ("roulette", "heterodyne", "direct")


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 < eta <= 1.0:
        raise ValidationError(f"quantum efficiency eta must lie in (0, 1] (got {eta})")
    return eta


@dataclass(frozen=True)
class DetectorConfig:
    """Detection scheme tag plus quantum efficiency."""

    scheme: str
    eta: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(
                f"scheme must be one of {SCHEMES} (got '{self.scheme}')"
            )
        _check_eta(self.eta)

    @property
    def smearing_variance(self) -> float:
        """Quadrature smearing variance (1 - eta)/(4 eta); derived, not stored."""
        return (1.0 - self.eta) / (4.0 * self.eta)


def thinned_distribution(rho: np.ndarray, eta: float) -> np.ndarray:
    """Bernoulli thinning of a number distribution: each photon survives
    independently with probability eta."""
    eta = _check_eta(eta)
    rho = np.asarray(rho, dtype=float)
    if eta == 1.0:
        return rho.copy()
    out = np.zeros_like(rho)
    for n in range(len(rho)):
        if rho[n] == 0.0:
            continue
        out[: n + 1] += rho[n] * _scipy_stats.binom.pmf(np.arange(n + 1), n, eta)
    return out


def direct_detection_pmf(stats: PhotonStatistics, eta: float) -> np.ndarray:
    """Probability mass over detected counts m for direct photodetection,
    p(m) = sum_{n >= m} rho_nn C(n, m) eta^m (1 - eta)^(n - m)."""
    return thinned_distribution(stats.rho, eta)


def roulette_density_x(stats: PhotonStatistics, x, eta: float = 1.0):
    """Outcome density of the random-phase homodyne quadrature.

    At eta = 1 this is the number-diagonal mixture of |<x|n>|^2; below unit
    efficiency it is that mixture convolved with a centred Gaussian of
    variance (1 - eta)/(4 eta), computed exactly via the thinned state:
    p_eta(x) = sqrt(eta) * p_thinned(sqrt(eta) x).
    """
    eta = _check_eta(eta)
    if eta == 1.0:
        return oscillator_mixture(stats.rho, x)
    weights = thinned_distribution(stats.rho, eta)
    root = math.sqrt(eta)
    scaled = oscillator_mixture(weights, root * np.asarray(x, dtype=float))
    out = root * scaled
    return float(out) if np.isscalar(x) else out


def roulette_density_y(stats: PhotonStatistics, y, eta: float = 1.0):
    """Density of the unbiased intensity outcome y = 2 x^2 - 1/(2 eta).

    Support is [-1/(2 eta), inf); the boundary value is the one-sided limit
    (infinite when the quadrature density is nonzero at the origin, zero
    otherwise).  The integrable inverse-square-root factor at the boundary
    is genuine and never clipped.
    """
    eta = _check_eta(eta)
    floor = -0.5 / eta
    scalar = np.isscalar(y)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.zeros_like(y)

    inside = y > floor
    if inside.any():
        x0 = np.sqrt(0.5 * (y[inside] - floor))
        out[inside] = roulette_density_x(stats, x0, eta) / (2.0 * x0)
    at_floor = y == floor
    if at_floor.any():
        origin = roulette_density_x(stats, 0.0, eta)
        out[at_floor] = math.inf if origin > 0.0 else 0.0
    return float(out[0]) if scalar else out


def _poisson_mixture(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """sum_n rho_n e^{-u} u^n / n! evaluated in the log domain, chunked in u."""
    n = np.arange(len(rho), dtype=float)
    lgn = gammaln(n + 1.0)
    out = np.empty_like(u)
    for start in range(0, len(u), 512):
        block = u[start : start + 512]
        safe = np.where(block > 0.0, block, 1.0)
        expo = -block[None, :] + n[:, None] * np.log(safe)[None, :] - lgn[:, None]
        out[start : start + 512] = rho @ np.exp(expo)
    zero = u == 0.0
    if zero.any():
        out[zero] = rho[0]
    return out


def _smeared_intensity_mixture(rho: np.ndarray, u: np.ndarray, eta: float) -> np.ndarray:
    """Density of u = |alpha|^2 after efficiency-eta heterodyne smearing.

    For a number state n the law is eta (1-eta)^n L_n(-u eta^2/(1-eta)) e^{-eta u};
    the damped Laguerre recurrence below keeps every intermediate bounded by
    the corresponding Fock density, so the sum is overflow-free at any order.
    """
    z = u * eta * eta / (1.0 - eta)
    damp = 1.0 - eta
    s_prev = np.exp(-eta * u)
    acc = rho[0] * s_prev
    if len(rho) > 1:
        s_cur = (1.0 + z) * damp * s_prev
        acc = acc + rho[1] * s_cur
        for k in range(1, len(rho) - 1):
            s_prev, s_cur = (
                s_cur,
                ((2.0 * k + 1.0 + z) * damp * s_cur - k * damp * damp * s_prev) / (k + 1.0),
            )
            if rho[k + 1] != 0.0:
                acc = acc + rho[k + 1] * s_cur
    return eta * acc


def heterodyne_density_I(stats: PhotonStatistics, intensity, eta: float = 1.0):
    """Outcome density of the heterodyne intensity estimator I = |alpha|^2 - 1/eta.

    At eta = 1 it is the radial marginal of the coherent-state (Husimi) law,
    p(I) = sum_n rho_nn e^{-(I+1)} (I+1)^n / n! on I >= -1; below unit
    efficiency the unit-efficiency amplitude acquires an isotropic complex
    Gaussian with per-quadrature variance (1/eta - 1)/2 and the support
    floor moves to -1/eta.
    """
    eta = _check_eta(eta)
    scalar = np.isscalar(intensity)
    intensity = np.atleast_1d(np.asarray(intensity, dtype=float))
    u = intensity + 1.0 / eta
    out = np.zeros_like(u)
    ok = u >= 0.0
    if ok.any():
        if eta == 1.0:
            out[ok] = _poisson_mixture(stats.rho, u[ok])
        else:
            out[ok] = _smeared_intensity_mixture(stats.rho, u[ok], eta)
    return float(out[0]) if scalar else out


def roulette_outcome_moment(stats: PhotonStatistics, eta: float = 1.0, order: int = 1) -> float:
    """Moment integral(y^order p_eta(y) dy) of the roulette intensity outcome.

    Integrated in the smooth quadrature parameterisation y = 2 x^2 - 1/(2 eta),
    which removes the inverse-square-root boundary factor of the y density.
    """
    eta = _check_eta(eta)
    n_top = stats.n_max
    x_lim = (math.sqrt((2.0 * n_top + 1.0) / 2.0) + 10.0) / math.sqrt(eta)
    panels = max(64, 2 * (n_top + 16))
    nodes, weights = gauss_legendre_grid(-x_lim, x_lim, panels)
    dens = roulette_density_x(stats, nodes, eta)
    est = intensity_estimator(nodes, eta) ** order if order else np.ones_like(nodes)
    return float(np.sum(weights * dens * est))


def heterodyne_outcome_moment(stats: PhotonStatistics, eta: float = 1.0, order: int = 1) -> float:
    """Moment integral(I^order p_eta(I) dI) of the heterodyne intensity outcome."""
    eta = _check_eta(eta)
    mean, _, var = moments(stats)
    upper = mean + 1.0 / eta + 4.0 * stats.n_max + 45.0 / eta + 10.0 * math.sqrt(var + 1.0) + 50.0
    panels = max(64, int(upper) + 2 * stats.n_max)
    u_nodes, weights = gauss_legendre_grid(0.0, upper, panels)
    if eta == 1.0:
        dens = _poisson_mixture(stats.rho, u_nodes)
    else:
        dens = _smeared_intensity_mixture(stats.rho, u_nodes, eta)
    outcome = u_nodes - 1.0 / eta
    est = outcome**order if order else np.ones_like(u_nodes)
    return float(np.sum(weights * dens * est))
