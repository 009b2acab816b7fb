import math
from dataclasses import replace

import numpy as np
import pytest

from eitdicke import (
    BallisticMediumError,
    BeamGeometry,
    EitParams,
    Spectrum,
    ValidityWarning,
    excess_hwhm,
    gaussian_fwhm,
    kinetics_report,
    narrowing_factor,
    peak_amplitude_ratio,
    rb87_neon_cell,
    residual_doppler_width,
    s2_lineshape,
    theoretical_fwhm,
)
from eitdicke.analysis import power_law_exponent

TWO_PI = 2.0 * math.pi
LAMBDA = 795e-9


def forced_paper_kinetics(kin):
    """Kinetics with the collision rate rounded to 8e7 /s as quoted, so the
    mean free path is 2.20 um; keeps the path*rate = v_th identity."""
    return replace(kin, collision_rate=8e7, mean_free_path=kin.v_th / 8e7)


class TestResidualDoppler:
    def test_half_mrad_value(self, kin):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        # theta*v_th/lambda = 5e-4 * 176.37 / 795 nm = 110.9 kHz
        assert residual_doppler_width(geom, kin.v_th) / TWO_PI == pytest.approx(
            111e3, rel=0.01
        )

    def test_zero_angle(self, kin):
        assert residual_doppler_width(BeamGeometry(0.0, LAMBDA), kin.v_th) == 0.0

    def test_gaussian_fwhm_companion_matches_quote(self, kin):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        fwhm = gaussian_fwhm(residual_doppler_width(geom, kin.v_th)) / TWO_PI
        assert 240e3 <= fwhm <= 275e3  # quoted as 250 kHz


class TestNarrowingFactor:
    def test_half_mrad_value(self, kin):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        assert narrowing_factor(geom, kin) == pytest.approx(8.7e-3, rel=0.10)

    def test_zero_angle(self, kin):
        assert narrowing_factor(BeamGeometry(0.0, LAMBDA), kin) == 0.0

    def test_two_formulas_agree(self, kin):
        # Gamma_D_res/gamma == 2*pi*theta*L/lambda given L*gamma = v_th
        geom = BeamGeometry(0.5e-3, LAMBDA)
        alt = TWO_PI * geom.angle * kin.mean_free_path / LAMBDA
        assert narrowing_factor(geom, kin) == pytest.approx(alt, rel=1e-12)

    def test_ballistic_medium_signals(self, kin):
        ballistic = replace(kin, collision_rate=0.0)
        with pytest.raises(BallisticMediumError):
            narrowing_factor(BeamGeometry(0.5e-3, LAMBDA), ballistic)


class TestExcessWidth:
    def test_full_width_excess_matches_2khz_quote(self, kin, eit):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        fwhm_excess = 2.0 * excess_hwhm(geom, kin) / TWO_PI
        assert 1.6e3 <= fwhm_excess <= 2.3e3  # quoted as "only 2 kHz"

    def test_half_mrad_with_rounded_rate(self, kin):
        # with L = 2.20 um: 2*(2*pi*L/lambda)*(v_th/lambda)*(5e-4)^2 = 1.93 kHz
        geom = BeamGeometry(0.5e-3, LAMBDA)
        forced = forced_paper_kinetics(kin)
        assert 2.0 * excess_hwhm(geom, forced) / TWO_PI == pytest.approx(1.93e3, rel=0.05)

    def test_one_mrad_with_rounded_rate(self, kin):
        # hwhm excess (2*pi*L/lambda)*Gamma_D*theta^2 at 1 mrad, L = 2.20 um:
        # 17.39 * 221.85e6 * 1e-6 = 3.86 kHz
        geom = BeamGeometry(1.0e-3, LAMBDA)
        forced = forced_paper_kinetics(kin)
        assert excess_hwhm(geom, forced) / TWO_PI == pytest.approx(3.86e3, rel=0.05)

    def test_quadratic_law_exact(self, kin):
        base = excess_hwhm(BeamGeometry(0.5e-3, LAMBDA), kin)
        assert excess_hwhm(BeamGeometry(1.0e-3, LAMBDA), kin) == pytest.approx(
            4.0 * base, rel=1e-14
        )

    @pytest.mark.parametrize("c", [2.0, 3.0, 7.5])
    def test_invariance_theta_down_path_up(self, kin, c):
        # theta -> theta/c with L -> c^2 L leaves the excess unchanged
        geom = BeamGeometry(1.0e-3, LAMBDA)
        scaled_geom = BeamGeometry(geom.angle / c, LAMBDA)
        scaled_kin = replace(
            kin,
            mean_free_path=c**2 * kin.mean_free_path,
            collision_rate=kin.collision_rate / c**2,
        )
        assert excess_hwhm(scaled_geom, scaled_kin) == pytest.approx(
            excess_hwhm(geom, kin), rel=1e-12
        )


class TestS2Lineshape:
    def grid(self, eit, kin, theta, n=2001, span_fwhm=30.0):
        width = theoretical_fwhm(BeamGeometry(theta, LAMBDA), eit, kin)
        half = 0.5 * span_fwhm * width
        return np.linspace(eit.light_shift - half, eit.light_shift + half, n)

    def test_extremum_at_center_without_light_shift(self, kin, eit):
        for theta in (0.0, 0.5e-3, 1.0e-3):
            grid = self.grid(eit, kin, theta)
            spec = s2_lineshape(grid, BeamGeometry(theta, LAMBDA), eit, kin)
            assert abs(grid[np.argmin(spec.values)]) < grid[1] - grid[0]

    def test_light_shift_moves_center(self, kin, eit):
        shifted = EitParams(
            gamma_opt=eit.gamma_opt, gamma_12=eit.gamma_12,
            rabi_pump=eit.rabi_pump, light_shift=TWO_PI * 500.0,
        )
        grid = self.grid(shifted, kin, 0.5e-3)
        spec = s2_lineshape(grid, BeamGeometry(0.5e-3, LAMBDA), shifted, kin)
        center = grid[np.argmin(spec.values)]
        assert center == pytest.approx(TWO_PI * 500.0, abs=grid[1] - grid[0])

    def test_half_extremum_at_half_width(self, kin, eit):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        w = eit.gamma_12 + excess_hwhm(geom, kin)
        grid = np.array([-3.0 * w, -w, 0.0, w, 3.0 * w])
        spec = s2_lineshape(grid, geom, eit, kin)
        peak = spec.values[2]
        assert spec.values[1] == pytest.approx(0.5 * peak, rel=1e-12)
        assert spec.values[3] == pytest.approx(0.5 * peak, rel=1e-12)

    def test_lorentzian_shape_identity(self, kin, eit):
        # value(0) / value(3w) = 10 for a Lorentzian of half-width w
        geom = BeamGeometry(0.5e-3, LAMBDA)
        w = eit.gamma_12 + excess_hwhm(geom, kin)
        grid = np.array([-3.0 * w, 0.0, 3.0 * w])
        spec = s2_lineshape(grid, geom, eit, kin)
        assert spec.values[1] / spec.values[2] == pytest.approx(10.0, rel=1e-12)

    def test_values_nonpositive(self, kin, eit):
        grid = self.grid(eit, kin, 1.0e-3)
        spec = s2_lineshape(grid, BeamGeometry(1.0e-3, LAMBDA), eit, kin)
        assert np.all(spec.values <= 0.0)
        assert spec.kind == "absorption"

    def test_rabi_scaling(self, kin, eit):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        grid = self.grid(eit, kin, 0.5e-3, n=101)
        doubled = EitParams(
            gamma_opt=eit.gamma_opt, gamma_12=eit.gamma_12,
            rabi_pump=2.0 * eit.rabi_pump, light_shift=eit.light_shift,
        )
        base = s2_lineshape(grid, geom, eit, kin)
        scaled = s2_lineshape(grid, geom, doubled, kin)
        assert np.allclose(scaled.values, 4.0 * base.values, rtol=1e-14)

    def test_rejects_bad_grid(self, kin, eit):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        with pytest.raises(ValueError):
            s2_lineshape(np.array([]), geom, eit, kin)
        with pytest.raises(ValueError):
            s2_lineshape(np.array([1.0, 1.0, 2.0]), geom, eit, kin)


class TestLorentzianWidthExtraction:
    @pytest.mark.parametrize("theta", [0.0, 0.2e-3, 0.5e-3, 1.0e-3])
    def test_numeric_fwhm_matches_closed_form(self, kin, eit, theta):
        # dense, wide grid: tail bias on the model-free baseline stays
        # well below the 0.1% agreement bound
        from eitdicke.analysis import numeric_fwhm

        geom = BeamGeometry(theta, LAMBDA)
        width = theoretical_fwhm(geom, eit, kin)
        grid = np.linspace(-25.0 * width, 25.0 * width, 4001)
        spec = s2_lineshape(grid, geom, eit, kin)
        assert numeric_fwhm(spec) == pytest.approx(width, rel=1e-3)


class TestPeakAmplitudeRatio:
    def test_unity_at_zero_angle(self, kin, eit):
        assert peak_amplitude_ratio(BeamGeometry(0.0, LAMBDA), eit, kin) == 1.0

    def test_one_mrad_value(self, kin, eit):
        # frozen from the closed-form chain with the exact kinetics
        # (L = 2.380 um): first factor 0.99997, second 1000/(1000+4173.4)
        ratio = peak_amplitude_ratio(BeamGeometry(1.0e-3, LAMBDA), eit, kin)
        assert ratio == pytest.approx(0.19330, rel=1e-3)

    def test_monotone_decreasing(self, kin, eit):
        thetas = np.linspace(0.0, 0.01, 60)
        ratios = [peak_amplitude_ratio(BeamGeometry(t, LAMBDA), eit, kin) for t in thetas]
        assert np.all(np.diff(ratios) < 0.0)

    def test_zero_gamma12_rejected(self, kin):
        eit0 = EitParams(gamma_opt=TWO_PI * 150e6, gamma_12=0.0)
        with pytest.raises(ValueError):
            peak_amplitude_ratio(BeamGeometry(0.5e-3, LAMBDA), eit0, kin)

    def test_consistent_with_lineshape_peak(self, kin, eit):
        # ratio(theta) * peak(0) == peak(theta) to machine precision
        grid = np.array([-1.0, 0.0, 1.0])
        peak0 = s2_lineshape(grid, BeamGeometry(0.0, LAMBDA), eit, kin).values[1]
        for theta in (0.2e-3, 0.5e-3, 1.0e-3, 1.9e-3):
            geom = BeamGeometry(theta, LAMBDA)
            peak = s2_lineshape(grid, geom, eit, kin).values[1]
            ratio = peak_amplitude_ratio(geom, eit, kin)
            assert ratio * peak0 == pytest.approx(peak, rel=1e-12)


class TestTheoreticalFwhm:
    def test_zero_angle(self, kin, eit):
        assert theoretical_fwhm(BeamGeometry(0.0, LAMBDA), eit, kin) == 2.0 * eit.gamma_12

    def test_excess_at_half_mrad_with_rounded_rate(self, kin, eit):
        forced = forced_paper_kinetics(kin)
        diff = (
            theoretical_fwhm(BeamGeometry(0.5e-3, LAMBDA), eit, forced)
            - theoretical_fwhm(BeamGeometry(0.0, LAMBDA), eit, forced)
        ) / TWO_PI
        assert diff == pytest.approx(1.93e3, rel=0.05)

    def test_loglog_slope_is_two(self, kin, eit):
        thetas = np.linspace(0.1e-3, 1.0e-3, 12)
        fwhm0 = theoretical_fwhm(BeamGeometry(0.0, LAMBDA), eit, kin)
        excesses = [
            theoretical_fwhm(BeamGeometry(t, LAMBDA), eit, kin) - fwhm0 for t in thetas
        ]
        fit = power_law_exponent(thetas, excesses)
        assert fit.exponent == pytest.approx(2.000, abs=0.01)

    def test_width_amplitude_duality(self, kin, eit):
        # when the optical-rate correction is negligible, the amplitude ratio
        # equals gamma_12 over the half-width
        for theta in (0.2e-3, 0.5e-3, 1.0e-3):
            geom = BeamGeometry(theta, LAMBDA)
            first_factor_correction = (
                math.pi * kin.mean_free_path / LAMBDA * kin.doppler_width * theta**2
            ) / eit.gamma_opt
            assert first_factor_correction < 1e-4
            dual = eit.gamma_12 / (0.5 * theoretical_fwhm(geom, eit, kin))
            assert peak_amplitude_ratio(geom, eit, kin) == pytest.approx(dual, rel=1e-4)


class TestValidityWarnings:
    def test_power_broadening_warns(self):
        with pytest.warns(ValidityWarning):
            EitParams(gamma_opt=TWO_PI * 150e6, gamma_12=TWO_PI * 10.0, rabi_pump=TWO_PI * 1e6)

    def test_reference_params_do_not_warn(self, eit):
        # construction in the fixture must stay silent; re-build to check
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            EitParams(
                gamma_opt=eit.gamma_opt, gamma_12=eit.gamma_12, rabi_pump=eit.rabi_pump
            )

    def test_large_narrowing_factor_warns(self, eit):
        thin = kinetics_report(rb87_neon_cell(buffer_pressure=0.25 * 10 * 133.322))
        geom = BeamGeometry(0.01, LAMBDA)  # eta = 0.75 here
        with pytest.warns(ValidityWarning):
            s2_lineshape(np.linspace(-1e5, 1e5, 11), geom, eit, thin)


class TestGeometryAndSpectrumTypes:
    def test_angle_bounds(self):
        with pytest.raises(ValueError):
            BeamGeometry(-1e-4, LAMBDA)
        with pytest.raises(ValueError):
            BeamGeometry(0.02, LAMBDA)

    def test_delta_q(self):
        geom = BeamGeometry(0.5e-3, LAMBDA)
        assert geom.delta_q == pytest.approx(TWO_PI / LAMBDA * 0.5e-3, rel=1e-15)
        # 3951 rad/m at these settings
        assert geom.delta_q == pytest.approx(3951.0, rel=1e-3)

    def test_spectrum_validation(self):
        with pytest.raises(ValueError):
            Spectrum(detuning=np.array([0.0, 1.0]), values=np.array([1.0]))
        with pytest.raises(ValueError):
            Spectrum(detuning=np.array([1.0, 0.0]), values=np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            Spectrum(detuning=np.array([0.0, 1.0]), values=np.array([1.0, math.inf]))
        with pytest.raises(ValueError):
            Spectrum(detuning=np.array([0.0, 1.0]), values=np.array([1.0, 2.0]), kind="bogus")
