"""Indicator module: witness, squeezing ratio, negativity, onsets."""

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from conftest import two_mode_squeezed_cov
from dcesim import (
    CovarianceMatrix,
    InvalidCovarianceError,
    MomentSet,
    covariance_matrix,
    fdf_min,
    fdf_theta,
    indicators_from_moments,
    logarithmic_negativity,
    mode_pair,
    modulation_parameter,
    moments_from_covariance,
    onset_estimates,
    output_moments,
    sigma2_threshold,
    thermal_occupation,
    two_mode_squeezing,
)


def fdf_grid_oracle(moments, points=1024):
    """Brute-force minimum over the squeezing axis.

    A coarse grid locates the basin; a bounded scalar minimization refines
    the winner to convergence.  Independent of the closed form under test.
    """
    thetas = np.linspace(0.0, math.pi, points, endpoint=False)
    values = [fdf_theta(moments, t) for t in thetas]
    best = int(np.argmin(values))
    step = math.pi / points
    lo = thetas[best] - step
    hi = thetas[best] + step
    result = minimize_scalar(lambda t: fdf_theta(moments, t),
                             bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-14})
    return min(result.fun, values[best])


def random_physical_moments(rng):
    """Random Gaussian two-mode state, built to be physical by construction.

    Starts from a two-mode squeezed thermal covariance and applies local
    phase rotations, local squeezers and a passive beam splitter (all
    symplectic), then reads the moments back off the covariance.
    """
    v = two_mode_squeezed_cov(
        r=rng.uniform(0.0, 1.0),
        n_minus=rng.uniform(0.0, 0.5),
        n_plus=rng.uniform(0.0, 0.5),
    ).matrix

    def rot(phi):
        return np.array([[math.cos(phi), math.sin(phi)],
                         [-math.sin(phi), math.cos(phi)]])

    s = np.zeros((4, 4))
    r1 = rng.uniform(-0.3, 0.3)
    r2 = rng.uniform(-0.3, 0.3)
    s[:2, :2] = rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(r1),
                                                            math.exp(-r1)])
    s[2:, 2:] = rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(r2),
                                                            math.exp(-r2)])
    t = rng.uniform(0, 2 * math.pi)
    bs = np.eye(4) * math.cos(t)
    bs[:2, 2:] = math.sin(t) * np.eye(2)
    bs[2:, :2] = -math.sin(t) * np.eye(2)
    full = bs @ s
    return moments_from_covariance(CovarianceMatrix(full @ v @ full.T))


class TestFdfTheta:
    def test_classical_thermal_state_passes_for_all_axes(self, config, pair):
        m = output_moments(config.with_(epsilon=0.0), pair)
        for theta in np.linspace(0.0, 2 * math.pi, 32):
            assert fdf_theta(m, theta) >= 0.0

    def test_optimal_axis_vacuum_value(self, config, pair):
        # the weak-drive closed form keeps only the input occupations:
        # at T = 0 and axis 0 the witness is -4 lam exactly
        cfg = config.with_(epsilon=0.1, temperature=0.0)
        lam = modulation_parameter(cfg, pair)
        first_order = MomentSet(n_plus=0.0, n_minus=0.0, w=1.0j * lam)
        assert fdf_theta(first_order, 0.0) == pytest.approx(-4.0 * lam, rel=1e-12)
        assert fdf_theta(first_order, 0.0) == pytest.approx(-0.0534, abs=1e-4)
        # the perturbative branch keeps the pair-produced flux on top
        m = output_moments(cfg, pair, method="perturbative")
        assert fdf_theta(m, 0.0) == pytest.approx(-4.0 * lam * (1.0 - lam),
                                                  rel=1e-12)

    def test_quarter_turn_kills_the_squeezing_term(self, config, pair):
        cfg = config.with_(epsilon=0.1)
        m = output_moments(cfg, pair, method="perturbative")
        nb = (thermal_occupation(pair.omega_plus, cfg.temperature)
              + thermal_occupation(pair.omega_minus, cfg.temperature))
        lam = modulation_parameter(cfg, pair)
        expected = 2 * (nb + 2 * lam ** 2 * (1 + nb))
        assert fdf_theta(m, math.pi / 4) == pytest.approx(expected, rel=1e-12)

    def test_reduces_to_weak_drive_form(self, config, pair):
        cfg = config.with_(epsilon=0.05)
        m = output_moments(cfg, pair, method="perturbative")
        lam = modulation_parameter(cfg, pair)
        nb = (thermal_occupation(pair.omega_plus, cfg.temperature)
              + thermal_occupation(pair.omega_minus, cfg.temperature))
        for theta in np.linspace(0.0, math.pi, 9):
            closed = (2 * m.n_plus + 2 * m.n_minus
                      - 4 * math.cos(2 * theta) * lam * (1 + nb))
            assert fdf_theta(m, theta) == pytest.approx(closed, rel=1e-12)


class TestFdfMin:
    def test_perturbative_optimum_is_zero_axis(self, config, pair):
        m = output_moments(config.with_(epsilon=0.1), pair, method="perturbative")
        theta_opt, _ = fdf_min(m)
        assert theta_opt == pytest.approx(0.0, abs=1e-12)

    def test_sign_flips_at_half_thermal_occupation(self, config, pair):
        nb_p = thermal_occupation(pair.omega_plus, config.temperature)
        nb_m = thermal_occupation(pair.omega_minus, config.temperature)
        lam_unit = modulation_parameter(config.with_(epsilon=1.0 - 1e-12), pair)
        # weak-drive balance point: lam = (nb+ + nb-) / 2, ignoring the
        # stimulated enhancement
        eps_flip = 0.5 * (nb_p + nb_m) / lam_unit
        low = output_moments(config.with_(epsilon=0.8 * eps_flip), pair,
                             method="perturbative")
        high = output_moments(config.with_(epsilon=1.2 * eps_flip), pair,
                              method="perturbative")
        assert fdf_min(low)[1] > 0.0
        assert fdf_min(high)[1] < 0.0

    def test_closed_form_matches_grid_search(self):
        rng = np.random.default_rng(20250811)
        worst = 0.0
        for _ in range(100):
            m = random_physical_moments(rng)
            _, closed = fdf_min(m)
            worst = max(worst, abs(closed - fdf_grid_oracle(m)))
        assert worst < 1e-12

    def test_theta_opt_attains_the_minimum(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            m = random_physical_moments(rng)
            theta_opt, value = fdf_min(m)
            assert 0.0 <= theta_opt < math.pi
            assert fdf_theta(m, theta_opt) == pytest.approx(value, abs=1e-12)


class TestTwoModeSqueezing:
    def test_zero_without_drive(self, config, pair):
        m = output_moments(config.with_(epsilon=0.0), pair)
        assert two_mode_squeezing(m, pair) == 0.0

    def test_perturbative_vacuum_value(self, config, pair):
        cfg = config.with_(epsilon=0.1, temperature=0.0)
        m = output_moments(cfg, pair, method="perturbative")
        value = two_mode_squeezing(m, pair)
        assert value == pytest.approx(0.0255, abs=1e-4)

    def test_fixed_phase_never_beats_the_optimum(self, config, pair):
        m = output_moments(config.with_(epsilon=0.2), pair)
        best = two_mode_squeezing(m, pair)
        for phi in np.linspace(0.0, math.pi, 17):
            assert two_mode_squeezing(m, pair, phi=phi) <= best + 1e-15

    def test_axis_mapping_links_the_two_tests(self, config, pair):
        # theta = phi + pi/4 makes sigma2 > threshold exactly equivalent
        # to a negative witness whenever s_pm = x = 0
        for eps, temp in ((0.1, 0.05), (0.2, 0.02), (0.05, 0.08)):
            cfg = config.with_(epsilon=eps, temperature=temp)
            m = output_moments(cfg, pair, method="numeric")
            threshold = sigma2_threshold(m, pair)
            scale = m.n_plus + m.n_minus + 1.0
            for phi in np.linspace(0.0, 2 * math.pi, 64, endpoint=False):
                witness = fdf_theta(m, phi + math.pi / 4)
                excess = two_mode_squeezing(m, pair, phi=phi) - threshold
                if abs(witness) < 1e-12 * scale:
                    continue  # both sides at the boundary within roundoff
                assert (witness < 0.0) == (excess > 0.0)


class TestSigma2Threshold:
    def test_vacuum_fluxes_give_zero(self, pair):
        m = MomentSet(n_plus=0.0, n_minus=0.0)
        assert sigma2_threshold(m, pair) == 0.0

    def test_symmetric_reduction(self, config):
        wd = config.drive_angular_frequency
        p = mode_pair(wd, 0.0)
        for n in (0.01, 0.1, 1.0):
            m = MomentSet(n_plus=n, n_minus=n)
            assert sigma2_threshold(m, p) == pytest.approx(
                2 * n / (2 * n + 1), rel=1e-12)

    def test_weak_drive_limit_value(self, config, pair):
        m = output_moments(config.with_(epsilon=0.0), pair)
        assert sigma2_threshold(m, pair) == pytest.approx(0.0353, abs=2e-4)


class TestLogarithmicNegativity:
    def test_vacuum(self):
        assert logarithmic_negativity(CovarianceMatrix.vacuum()) == 0.0

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_pure_two_mode_squeezed_value(self, r):
        # nu_- = exp(-2r)/2, so the natural-log negativity is exactly 2r
        value = logarithmic_negativity(two_mode_squeezed_cov(r))
        assert value == pytest.approx(2.0 * r, abs=1e-10)

    def test_symplectic_eigenvalue_at_half_squeeze(self):
        v = two_mode_squeezed_cov(0.5)
        value = logarithmic_negativity(v)
        nu = 0.5 * math.exp(-value)
        assert nu == pytest.approx(math.exp(-1.0) / 2.0, rel=1e-10)
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_thermal_state_not_entangled(self, config, pair):
        m = output_moments(config.with_(epsilon=0.0), pair)
        assert logarithmic_negativity(covariance_matrix(m)) == 0.0

    def test_perturbative_slope_matches_drive_strength(self, config):
        # at vanishing detuning the weak-drive negativity is
        # (L0 omega_d / v) * eps
        wd = config.drive_angular_frequency
        p = mode_pair(wd, 0.01 * wd)
        cfg = config.with_(epsilon=1e-3, temperature=0.0)
        m = output_moments(cfg, p, method="perturbative")
        slope = logarithmic_negativity(covariance_matrix(m)) / cfg.epsilon
        assert slope == pytest.approx(0.28, rel=2e-3)

    def test_invalid_covariance_rejected(self):
        # a matrix violating the uncertainty relation badly enough to turn
        # the discriminant negative must raise, not return a number
        bad = np.diag([0.5, 0.5, 0.5, 0.5])
        bad[0, 2] = bad[2, 0] = 1.5
        bad[1, 3] = bad[3, 1] = 1.2
        with pytest.raises(InvalidCovarianceError):
            logarithmic_negativity(CovarianceMatrix(bad))


class TestOnsets:
    def test_zero_temperature(self, config, pair):
        cfg = config.with_(temperature=0.0)
        assert onset_estimates(cfg, pair) == (0.0, 0.0)

    def test_calibrated_values(self, config, pair):
        eps_star, eps_0 = onset_estimates(config, pair)
        assert eps_0 == pytest.approx(0.060, abs=1e-3)
        assert eps_star == pytest.approx(0.142, abs=1e-3)

    def test_witness_onset_matches_perturbative_root(self, config, pair):
        eps_star, _ = onset_estimates(config, pair)
        nb = (thermal_occupation(pair.omega_plus, config.temperature)
              + thermal_occupation(pair.omega_minus, config.temperature))
        lam = modulation_parameter(config.with_(epsilon=eps_star), pair)
        assert lam == pytest.approx(nb / 2.0, rel=1e-12)


class TestMonotonicityAndReport:
    def test_witness_falls_and_negativity_rises_with_drive(self, config, pair):
        fdf_values = []
        neg_values = []
        for eps in np.linspace(0.0, 0.6, 7):
            m = output_moments(config.with_(epsilon=float(eps)), pair)
            fdf_values.append(fdf_min(m)[1])
            neg_values.append(logarithmic_negativity(covariance_matrix(m)))
        assert all(a > b for a, b in zip(fdf_values, fdf_values[1:]))
        rising = [b >= a for a, b in zip(neg_values, neg_values[1:])]
        assert all(rising)
        assert neg_values[-1] > 0.0

    def test_report_flags_are_consistent(self, config, pair):
        for eps in (0.0, 0.05, 0.2, 0.5):
            report = indicators_from_moments(
                output_moments(config.with_(epsilon=eps), pair), pair)
            assert report.nonclassical_by_fdf == (report.fdf_min < 0)
            assert report.nonclassical_by_sigma2 == (
                report.sigma2 > report.sigma2_threshold)
            assert report.entangled == (report.logneg > 0)

    def test_classicality_sanity_without_drive(self, config, pair):
        report = indicators_from_moments(
            output_moments(config.with_(epsilon=0.0), pair), pair)
        assert report.fdf_min >= 0.0
        assert report.sigma2 == 0.0
        assert report.logneg == 0.0
        assert not (report.nonclassical_by_fdf or report.nonclassical_by_sigma2
                    or report.entangled)
