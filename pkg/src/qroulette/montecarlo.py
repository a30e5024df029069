"""Seeded Monte Carlo simulation of the three detection schemes.

Draws are produced in fixed-size chunks, each with its own random stream
derived deterministically from (seed, scheme, chunk index).  Workers only
decide which process evaluates which chunk, so a given configuration is
bit-reproducible for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .estimators import heterodyne_estimator, intensity_estimator
from .noise import NoiseReport, noise_report
from .numerics import build_inverse_cdf, oscillator_density
from .pom import SCHEMES, DetectorConfig
from .states import StateSpec, exact_moments, photon_distribution

__all__ = [
    "ExperimentConfig",
    "SampleSummary",
    "run_comparison",
    "run_sampling",
    "sample_direct",
    "sample_heterodyne",
    "sample_roulette",
]

CHUNK_SIZE = 1 << 17
MAX_HISTOGRAM_BINS = 512
_SCHEME_INDEX = {scheme: i for i, scheme in enumerate(SCHEMES)}


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible sampling run."""

    state: StateSpec
    detector: DetectorConfig
    n_samples: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValidationError(f"n_samples must be >= 1 (got {self.n_samples})")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1 (got {self.workers})")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SampleSummary:
    """Summary statistics of one sampling run, histogram included."""

    scheme: str
    eta: float
    state: str
    n_samples: int
    seed: int
    workers: int
    mean: float
    sample_variance: float
    standard_error: float
    bin_centers: tuple[float, ...]
    bin_counts: tuple[int, ...]

    @property
    def histogram(self) -> list[tuple[float, int]]:
        return list(zip(self.bin_centers, self.bin_counts))

    def to_dict(self) -> dict:
        """JSON-ready payload.

        Deliberately omits `workers`: results are independent of the worker
        count, so the serialised summary must be too (the manifest records
        the execution parameters).
        """
        return {
            "scheme": self.scheme,
            "eta": self.eta,
            "state": self.state,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "mean": self.mean,
            "sample_variance": self.sample_variance,
            "standard_error": self.standard_error,
            "histogram": [[center, count] for center, count in self.histogram],
        }


@lru_cache(maxsize=64)
def _sampling_rho(spec: StateSpec) -> np.ndarray:
    rho = photon_distribution(spec).rho
    rho = rho / rho.sum()
    rho.setflags(write=False)
    return rho


@lru_cache(maxsize=256)
def _quadrature_table(n: int):
    limit = math.sqrt((2.0 * n + 1.0) / 2.0) + 8.0
    return build_inverse_cdf(lambda x: oscillator_density(n, x), (-limit, limit), tol=1e-6)


def _chunk_outcomes(
    spec: StateSpec, scheme: str, eta: float, seed: int, chunk_index: int, size: int
) -> np.ndarray:
    """Outcomes for one chunk; a pure function of its arguments."""
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(_SCHEME_INDEX[scheme], chunk_index))
    )
    rho = _sampling_rho(spec)
    ns = rng.choice(len(rho), size=size, p=rho)

    if scheme == "roulette":
        u = rng.random(size)
        x = np.empty(size)
        for n in np.unique(ns):
            table = _quadrature_table(int(n))
            mask = ns == n
            x[mask] = np.interp(u[mask], table.cdf, table.grid)
        if eta < 1.0:
            x = x + rng.normal(0.0, math.sqrt((1.0 - eta) / (4.0 * eta)), size)
        return intensity_estimator(x, eta)

    if scheme == "heterodyne":
        # |alpha|^2 for a number state n is Gamma(n + 1, 1) (Husimi radial law)
        u = rng.gamma(ns + 1.0)
        if eta < 1.0:
            sigma = math.sqrt((1.0 / eta - 1.0) / 2.0)
            gx = rng.normal(0.0, sigma, size)
            gy = rng.normal(0.0, sigma, size)
            return heterodyne_estimator(np.sqrt(u) + gx, gy, eta)
        return heterodyne_estimator(np.sqrt(u), np.zeros(size), eta)

    m = rng.binomial(ns, eta)
    return m / eta


def _histogram(outcomes: np.ndarray) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Freedman-Diaconis binning clipped to MAX_HISTOGRAM_BINS bins."""
    lo = float(outcomes.min())
    hi = float(outcomes.max())
    n = len(outcomes)
    if hi == lo:
        return (lo,), (n,)
    q25, q75 = np.percentile(outcomes, [25.0, 75.0])
    iqr = q75 - q25
    if iqr > 0.0:
        width = 2.0 * iqr / n ** (1.0 / 3.0)
        bins = int(np.clip(math.ceil((hi - lo) / width), 1, MAX_HISTOGRAM_BINS))
    else:
        bins = min(MAX_HISTOGRAM_BINS, 64)
    counts, edges = np.histogram(outcomes, bins=bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return tuple(float(c) for c in centers), tuple(int(c) for c in counts)


def _summarize(outcomes: np.ndarray, config: ExperimentConfig) -> SampleSummary:
    n = len(outcomes)
    mean = float(np.mean(outcomes))
    variance = float(np.var(outcomes, ddof=1)) if n > 1 else 0.0
    centers, counts = _histogram(outcomes)
    return SampleSummary(
        scheme=config.detector.scheme,
        eta=config.detector.eta,
        state=config.state.describe(),
        n_samples=n,
        seed=config.seed,
        workers=config.workers,
        mean=mean,
        sample_variance=variance,
        standard_error=math.sqrt(variance / n),
        bin_centers=centers,
        bin_counts=counts,
    )


def draw_outcomes(config: ExperimentConfig) -> np.ndarray:
    """All outcomes of a run, in the fixed chunk order."""
    scheme, eta = config.detector.scheme, config.detector.eta
    sizes = [CHUNK_SIZE] * (config.n_samples // CHUNK_SIZE)
    if config.n_samples % CHUNK_SIZE:
        sizes.append(config.n_samples % CHUNK_SIZE)
    args = [
        (config.state, scheme, eta, config.seed, index, size)
        for index, size in enumerate(sizes)
    ]
    if config.workers == 1 or len(args) == 1:
        chunks = [_chunk_outcomes(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(args))) as pool:
            chunks = list(pool.map(_chunk_outcomes, *zip(*args)))
    return np.concatenate(chunks)


def run_sampling(config: ExperimentConfig) -> SampleSummary:
    """Simulate the scheme named in config.detector and summarise the outcomes."""
    return _summarize(draw_outcomes(config), config)


def _check_scheme(config: ExperimentConfig, scheme: str) -> ExperimentConfig:
    if config.detector.scheme != scheme:
        raise ValidationError(
            f"config.detector.scheme is '{config.detector.scheme}', expected '{scheme}'"
        )
    return config


def sample_roulette(config: ExperimentConfig) -> SampleSummary:
    """Random-phase homodyne intensity sampling: n ~ rho_nn, x ~ |<x|n>|^2 via the
    cached inverse-CDF table, Gaussian smearing below unit efficiency, then the
    unbiased estimator 2 x^2 - 1/(2 eta)."""
    return run_sampling(_check_scheme(config, "roulette"))


def sample_heterodyne(config: ExperimentConfig) -> SampleSummary:
    """Heterodyne intensity sampling via the Husimi radial law plus complex
    Gaussian smearing below unit efficiency."""
    return run_sampling(_check_scheme(config, "heterodyne"))


def sample_direct(config: ExperimentConfig) -> SampleSummary:
    """Direct photodetection: Bernoulli thinning m ~ Binomial(n, eta), outcome m/eta."""
    return run_sampling(_check_scheme(config, "direct"))


def run_comparison(
    state: StateSpec, eta: float, n_samples: int, seed: int, workers: int = 1
) -> tuple[SampleSummary, SampleSummary, SampleSummary, NoiseReport]:
    """Run all three schemes on identical state/eta and attach the analytic report."""
    summaries = tuple(
        run_sampling(
            ExperimentConfig(
                state=state,
                detector=DetectorConfig(scheme=scheme, eta=eta),
                n_samples=n_samples,
                seed=seed,
                workers=workers,
            )
        )
        for scheme in SCHEMES
    )
    mean_n, mean_nsq = exact_moments(state)
    return summaries[0], summaries[1], summaries[2], noise_report(mean_n, mean_nsq, eta)
