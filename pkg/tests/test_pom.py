import math

import numpy as np
import pytest
from scipy import stats as scipy_stats
from scipy.special import i0e

from conftest import DENSITY_ETAS, MATRIX_STATES
from qroulette.errors import ValidationError
from qroulette.numerics import integrate
from qroulette.pom import (
    DetectorConfig,
    direct_detection_pmf,
    heterodyne_density_I,
    heterodyne_outcome_moment,
    roulette_density_x,
    roulette_density_y,
    roulette_outcome_moment,
)
from qroulette.noise import heterodyne_variance, roulette_variance
from qroulette.states import StateSpec, moments, photon_distribution

VACUUM = photon_distribution(StateSpec.vacuum())
FOCK1 = photon_distribution(StateSpec.fock(1))
FOCK2 = photon_distribution(StateSpec.fock(2))


class TestDetectorConfig:
    def test_smearing_variance_is_derived(self):
        config = DetectorConfig("roulette", 0.5)
        assert config.smearing_variance == pytest.approx(0.25)
        assert DetectorConfig("direct", 1.0).smearing_variance == 0.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            DetectorConfig("homodyne", 1.0)
        with pytest.raises(ValidationError):
            DetectorConfig("roulette", 0.0)
        with pytest.raises(ValidationError):
            DetectorConfig("roulette", 1.2)


class TestRouletteDensityX:
    def test_vacuum_closed_form(self):
        xs = np.linspace(-2.0, 2.0, 9)
        expected = math.sqrt(2 / math.pi) * np.exp(-2 * xs**2)
        assert roulette_density_x(VACUUM, xs) == pytest.approx(expected, rel=1e-12)

    def test_fock_one_closed_form(self):
        xs = np.linspace(-2.0, 2.0, 9)
        expected = 4 * xs**2 * math.sqrt(2 / math.pi) * np.exp(-2 * xs**2)
        assert roulette_density_x(FOCK1, xs) == pytest.approx(expected, rel=1e-12)

    def test_vacuum_half_efficiency_is_wider_gaussian(self):
        # N(0, 1/4) smeared by N(0, 1/4) has density exp(-x^2)/sqrt(pi)
        xs = np.linspace(-3.0, 3.0, 11)
        expected = np.exp(-(xs**2)) / math.sqrt(math.pi)
        assert roulette_density_x(VACUUM, xs, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_smearing_matches_direct_convolution(self):
        # independent route: numerically convolve the ideal density with the
        # smearing Gaussian instead of using the thinned-state closed form
        eta = 0.5
        sigma = math.sqrt((1 - eta) / (4 * eta))
        for x in (0.0, 0.4, 1.1):
            direct_route = integrate(
                lambda t: roulette_density_x(FOCK2, x - t)
                * math.exp(-t * t / (2 * sigma * sigma))
                / math.sqrt(2 * math.pi * sigma * sigma),
                -np.inf,
                np.inf,
                1e-11,
            )
            assert roulette_density_x(FOCK2, x, eta) == pytest.approx(direct_route, abs=1e-9)


class TestRouletteDensityY:
    def test_vacuum_closed_form(self):
        ys = np.linspace(-0.45, 4.0, 12)
        expected = np.exp(-(ys + 0.5)) / np.sqrt(math.pi * (ys + 0.5))
        assert roulette_density_y(VACUUM, ys) == pytest.approx(expected, rel=1e-12)

    def test_outside_support_is_zero(self):
        assert roulette_density_y(VACUUM, -0.6) == 0.0
        assert roulette_density_y(FOCK2, -1.1, 0.5) == 0.0

    def test_boundary_one_sided_limits(self):
        assert roulette_density_y(VACUUM, -0.5) == math.inf
        assert roulette_density_y(FOCK1, -0.5) == 0.0
        assert roulette_density_y(VACUUM, -1.0, 0.5) == math.inf

    def test_fock_mean_is_unbiased(self):
        for n in (0, 1, 2, 5):
            stats = photon_distribution(StateSpec.fock(n))
            assert roulette_outcome_moment(stats, 1.0, 1) == pytest.approx(n, abs=1e-8)


class TestHeterodyneDensity:
    def test_vacuum_closed_form(self):
        intensities = np.linspace(-1.0, 4.0, 11)
        expected = np.exp(-(intensities + 1.0))
        assert heterodyne_density_I(VACUUM, intensities) == pytest.approx(expected, rel=1e-12)

    def test_fock_one_closed_form(self):
        intensities = np.linspace(-0.9, 4.0, 11)
        expected = np.exp(-(intensities + 1.0)) * (intensities + 1.0)
        assert heterodyne_density_I(FOCK1, intensities) == pytest.approx(expected, rel=1e-12)

    def test_boundary_and_support(self):
        assert heterodyne_density_I(VACUUM, -1.0) == pytest.approx(1.0)
        assert heterodyne_density_I(VACUUM, -1.2) == 0.0
        assert heterodyne_density_I(VACUUM, -2.2, 0.5) == 0.0

    def test_mean_equals_mean_photon_number(self):
        for label, spec in MATRIX_STATES:
            stats = photon_distribution(spec)
            mean, _, _ = moments(stats)
            for eta in (1.0, 0.5):
                assert heterodyne_outcome_moment(stats, eta, 1) == pytest.approx(
                    mean, abs=1e-6
                ), label

    def test_smearing_matches_noncentral_convolution(self):
        # independent route: the smeared |alpha|^2 law is the Husimi radial
        # law pushed through a noncentral chi-square kernel with two degrees
        # of freedom
        eta = 0.5
        sigma_sq = (1 / eta - 1) / 2
        for intensity in (-1.5, 0.0, 1.0):
            u = intensity + 1 / eta

            def kernel(v, u=u):
                radial = math.exp(-v) * v  # |alpha|^2 law of fock(1) at eta = 1
                bessel = i0e(math.sqrt(u * v) / sigma_sq)
                gauss = math.exp(-((math.sqrt(u) - math.sqrt(v)) ** 2) / (2 * sigma_sq))
                return radial * bessel * gauss / (2 * sigma_sq)

            expected = integrate(kernel, 0.0, np.inf, 1e-11)
            assert heterodyne_density_I(FOCK1, intensity, eta) == pytest.approx(
                expected, abs=1e-9
            )


class TestDirectDetection:
    def test_fock_one_half_efficiency(self):
        assert direct_detection_pmf(FOCK1, 0.5) == pytest.approx([0.5, 0.5], abs=1e-14)

    def test_identity_at_unit_efficiency(self):
        for n in (0, 1, 4):
            stats = photon_distribution(StateSpec.fock(n))
            pmf = direct_detection_pmf(stats, 1.0)
            expected = np.zeros(n + 1)
            expected[n] = 1.0
            assert pmf == pytest.approx(expected)

    def test_thinned_coherent_is_poisson(self):
        stats = photon_distribution(StateSpec.coherent(3.0), 1e-12)
        for eta in (0.75, 0.4):
            pmf = direct_detection_pmf(stats, eta)
            expected = scipy_stats.poisson.pmf(np.arange(len(pmf)), eta * 3.0)
            assert pmf == pytest.approx(expected, abs=1e-10)

    def test_pmf_sums_to_one(self):
        for label, spec in MATRIX_STATES:
            stats = photon_distribution(spec)
            for eta in DENSITY_ETAS:
                total = direct_detection_pmf(stats, eta).sum()
                assert abs(total - 1.0) <= 1e-12 + stats.tail_bound, label

    def test_exact_variance_identity(self):
        # Var(m / eta) = <dn^2> + <n>(1/eta - 1), an exact finite-sum identity
        from qroulette.noise import direct_variance

        for label, spec in MATRIX_STATES:
            rho = photon_distribution(spec).rho
            rho = rho / rho.sum()
            stats = photon_distribution(spec)
            mean, mean_sq, _ = moments(stats)
            for eta in DENSITY_ETAS:
                pmf = direct_detection_pmf(stats, eta)
                pmf = pmf / pmf.sum()
                outcomes = np.arange(len(pmf)) / eta
                var = float(np.dot(outcomes**2, pmf) - np.dot(outcomes, pmf) ** 2)
                assert var == pytest.approx(
                    direct_variance(mean, mean_sq, eta), abs=1e-9
                ), (label, eta)


class TestMomentIdentities:
    @pytest.mark.parametrize("eta", DENSITY_ETAS)
    def test_normalization_across_matrix(self, matrix_stats, eta):
        for label, stats in matrix_stats.items():
            assert roulette_outcome_moment(stats, eta, 0) == pytest.approx(
                1.0, abs=1e-7
            ), label
            assert heterodyne_outcome_moment(stats, eta, 0) == pytest.approx(
                1.0, abs=1e-7
            ), label

    @pytest.mark.parametrize("eta", DENSITY_ETAS)
    def test_unbiasedness_across_matrix(self, matrix_stats, eta):
        for label, stats in matrix_stats.items():
            mean, _, _ = moments(stats)
            assert roulette_outcome_moment(stats, eta, 1) == pytest.approx(
                mean, abs=1e-6
            ), label

    @pytest.mark.parametrize("eta", DENSITY_ETAS)
    def test_roulette_second_moment_identity(self, matrix_stats, eta):
        for label, stats in matrix_stats.items():
            mean, mean_sq, _ = moments(stats)
            variance = (
                roulette_outcome_moment(stats, eta, 2)
                - roulette_outcome_moment(stats, eta, 1) ** 2
            )
            assert variance == pytest.approx(
                roulette_variance(mean, mean_sq, eta), abs=1e-6
            ), label

    @pytest.mark.parametrize("eta", DENSITY_ETAS)
    def test_heterodyne_second_moment_identity(self, matrix_stats, eta):
        # <I^2> = <n^2> + (2/eta - 1)<n> + 1/eta^2, equivalently the variance
        # formula after subtracting <I>^2 = <n>^2
        for label, stats in matrix_stats.items():
            mean, mean_sq, _ = moments(stats)
            second = heterodyne_outcome_moment(stats, eta, 2)
            expected = mean_sq + (2.0 / eta - 1.0) * mean + 1.0 / eta**2
            assert second == pytest.approx(expected, abs=1e-6), label
            variance = second - heterodyne_outcome_moment(stats, eta, 1) ** 2
            assert variance == pytest.approx(
                heterodyne_variance(mean, mean_sq, eta), abs=1e-6
            ), label
