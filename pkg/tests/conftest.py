import pytest

from qroulette.montecarlo import ExperimentConfig, run_sampling
from qroulette.pom import SCHEMES, DetectorConfig
from qroulette.states import StateSpec, photon_distribution

# the comparison matrix: every state family under test, across efficiencies
MATRIX_STATES = [
    ("vacuum", StateSpec.vacuum()),
    ("coherent1", StateSpec.coherent(1.0)),
    ("coherent4", StateSpec.coherent(4.0)),
    ("fock1", StateSpec.fock(1)),
    ("fock2", StateSpec.fock(2)),
    ("fock3", StateSpec.fock(3)),
    ("thermal1", StateSpec.thermal(1.0)),
    ("squeezed2_05", StateSpec.squeezed(2.0, 0.5)),
]
MC_ETAS = (1.0, 0.5, 0.25)
DENSITY_ETAS = (1.0, 0.75, 0.5, 0.25, 0.1)
MC_DRAWS = 10**6
MC_SEED = 20240917


@pytest.fixture(scope="session")
def matrix_stats():
    return {label: photon_distribution(spec) for label, spec in MATRIX_STATES}


@pytest.fixture(scope="session")
def matrix_runs():
    """One seeded million-draw run per (state, eta, scheme) matrix entry."""
    runs = {}
    for label, spec in MATRIX_STATES:
        for eta in MC_ETAS:
            for scheme in SCHEMES:
                config = ExperimentConfig(
                    state=spec,
                    detector=DetectorConfig(scheme, eta),
                    n_samples=MC_DRAWS,
                    seed=MC_SEED,
                )
                runs[(label, eta, scheme)] = run_sampling(config)
    return runs
