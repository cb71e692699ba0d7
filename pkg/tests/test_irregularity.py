"""
Oscillatory integrals, irregularity estimators and the scaling index

Framework: pytest + hypothesis
"""
import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from irregularity import (
    check_averaging_bound,
    check_interpolation,
    dyadic_windows,
    estimate_iota,
    estimate_rho_gamma,
    finite_grid_norm,
    fit_k_constant,
    gamma_sweep,
    iota_summary,
    irregularity_summary,
    k_sup,
    k_sup_bound,
    oscillatory_scan,
    phi,
    predicted_iota_from_rho,
    psi,
    scaling_integrals,
    write_iota_csv,
    write_scan_csv,
)
from rough_paths import derive_seed, generate_deterministic, generate_fbm, scale_path, shift_path
from utils.tables import read_csv


frequency_strategy = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
decay_strategy = st.floats(min_value=0.0, max_value=5.0, allow_nan=False)
seed_strategy = st.integers(min_value=0, max_value=2**32)


def zero_path(n_steps=1024, horizon=1.0):
    return generate_deterministic("custom", n_steps, horizon, values=np.zeros(n_steps + 1))


class TestOscillatoryIntegrals:

    @given(a=frequency_strategy)
    @settings(max_examples=25, deadline=None)
    def test_zero_path_gives_window_length(self, a):
        p = zero_path(256)
        assert phi(p, a, 0.25, 0.75) == pytest.approx(0.5, abs=1e-12)

    def test_zero_frequency_gives_window_length(self, fbm_path):
        assert phi(fbm_path, 0.0, 0.125, 1.0) == pytest.approx(0.875, abs=1e-12)

    def test_linear_path_full_period_vanishes(self):
        p = generate_deterministic("linear", 2**14, 1.0)
        assert abs(phi(p, 2.0 * np.pi, 0.0, 1.0)) < 1e-6

    @given(b=st.floats(min_value=0.1, max_value=5.0))
    @settings(max_examples=25, deadline=None)
    def test_psi_at_zero_frequency(self, b):
        p = generate_fbm(0.5, 1, 1024, 1.0, 3)
        s, t = 0.25, 0.75
        exact = (np.exp(-2 * b * s) - np.exp(-2 * b * t)) / (2 * b)
        assert psi(p, 0.0, b, s, t).real == pytest.approx(exact, rel=1e-4)

    @given(a=frequency_strategy)
    @settings(max_examples=25, deadline=None)
    def test_psi_without_decay_is_phi(self, a):
        p = generate_fbm(0.3, 1, 512, 1.0, 9)
        assert psi(p, a, 0.0, 0.125, 0.625) == phi(p, a, 0.125, 0.625)

    @given(seed=seed_strategy, a=frequency_strategy, b=decay_strategy)
    @settings(max_examples=30, deadline=None)
    def test_shift_identity(self, seed, a, b):
        p = generate_fbm(0.4, 1, 1024, 1.0, seed)
        s, t = 0.25, 0.75
        lhs = psi(p, a, b, s, t)
        w_s = p.scalar[p.index_of(s)]
        rhs = cmath.exp(1j * a * w_s - 2 * b * s) * psi(shift_path(p, s), a, b, 0.0, t - s)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1e-12)

    def test_window_must_be_ordered(self, fbm_path):
        with pytest.raises(ValueError, match="s < t"):
            phi(fbm_path, 1.0, 0.5, 0.25)

    def test_frequency_dimension(self, fbm_path):
        with pytest.raises(ValueError, match="length d=1"):
            phi(fbm_path, [1.0, 2.0], 0.0, 1.0)


class TestKSup:

    def test_zero_path_with_unit_decay(self):
        p = zero_path(1024, 1.0)
        exact = (1.0 - np.exp(-2.0)) / 2.0
        assert k_sup(p, 17.0, 1.0) == pytest.approx(exact, rel=1e-5)

    def test_no_frequency_no_decay(self, fbm_path):
        assert k_sup(fbm_path, 0.0, 0.0) == pytest.approx(1.0, rel=1e-10)

    def test_negative_decay_is_rejected(self, fbm_path):
        with pytest.raises(ValueError, match="nonnegative"):
            k_sup(fbm_path, 1.0, -1.0)

    def test_k_sup_dominates_the_unshifted_integral(self, fbm_path):
        assert k_sup(fbm_path, 8.0, 1.0) >= abs(psi(fbm_path, 8.0, 1.0, 0.0, 1.0)) - 1e-12

    def test_bound_needs_large_b(self):
        with pytest.raises(ValueError, match="\\|b\\| >= 1"):
            k_sup_bound(1.0, 0.5, 1.4, 64.0, 0.5)

    @pytest.mark.slow
    def test_fitted_constant_holds_on_fresh_paths(self):
        a, b, theta = 64.0, 1.0, 1.4

        def ensemble(offset):
            paths = [generate_fbm(0.5, 1, 4096, 1.0, derive_seed(42, offset + i)) for i in range(50)]
            reports = [estimate_rho_gamma(p) for p in paths]
            return paths, [r.norm_estimate for r in reports], [r.rho_hat for r in reports]

        cal_paths, cal_norms, cal_rhos = ensemble(0)
        constant = fit_k_constant(cal_paths, cal_norms, cal_rhos, a, b, theta)
        assert constant > 0
        paths, norms, rhos = ensemble(1000)
        within = [
            k_sup(p, a, b) <= 2.0 * k_sup_bound(n, r, theta, a, b, constant)
            for p, n, r in zip(paths, norms, rhos)
        ]
        assert sum(within) >= 45


class TestScan:

    def test_dyadic_windows(self):
        idx = dyadic_windows(generate_deterministic("linear", 64, 1.0), max_levels=3)
        assert idx.shape == (1 + 2 + 4 + 8, 2)
        assert idx[0].tolist() == [0, 64]
        assert np.all(idx[:, 1] - idx[:, 0] >= 4)

    def test_scan_respects_trivial_bound(self, fbm_path):
        scan = oscillatory_scan(fbm_path, np.geomspace(1, 128, 12))
        assert np.all(scan.magnitudes <= scan.window_lengths[None, :] + 1e-12)

    def test_scan_matches_phi(self, fbm_path):
        scan = oscillatory_scan(fbm_path, [3.0, 30.0], max_levels=2)
        for k, a in enumerate(scan.a_grid):
            for m, (s, t) in enumerate(scan.window_pairs):
                assert scan.magnitudes[k, m] == pytest.approx(abs(phi(fbm_path, a, s, t)), abs=1e-12)

    def test_finite_grid_norm_arguments(self, fbm_path):
        scan = oscillatory_scan(fbm_path, [1.0, 2.0])
        with pytest.raises(ValueError, match="rho"):
            finite_grid_norm(scan, -0.1, 0.5)
        with pytest.raises(ValueError, match="gamma"):
            finite_grid_norm(scan, 0.5, 1.5)

    def test_scan_csv(self, tmp_path, fbm_path):
        scan = oscillatory_scan(fbm_path, [1.0, 2.0], max_levels=1)
        assert write_scan_csv(scan, tmp_path / "scan.csv") == 2 * 3
        assert list(read_csv(tmp_path / "scan.csv")[0]) == ["a", "s", "t", "abs_phi"]


class TestRhoGamma:

    def test_linear_path_decay_is_one_minus_gamma(self):
        report = estimate_rho_gamma(generate_deterministic("linear", 4096, 1.0), gamma=0.5)
        assert 0.4 <= report.rho_hat <= 0.6
        assert not report.degenerate

    def test_constant_path_has_no_decay(self):
        report = estimate_rho_gamma(zero_path(1024))
        assert report.rho_hat == 0.0
        assert report.degenerate

    def test_argument_ranges(self, fbm_path):
        with pytest.raises(ValueError, match="gamma"):
            estimate_rho_gamma(fbm_path, gamma=0.0)
        with pytest.raises(ValueError, match="n_a"):
            estimate_rho_gamma(fbm_path, n_a=4)
        with pytest.raises(ValueError, match="a_max"):
            estimate_rho_gamma(fbm_path, a_max=2.0)

    def test_summary_fields(self, fbm_path):
        summary = irregularity_summary(estimate_rho_gamma(fbm_path, n_a=8))
        assert summary["n_frequencies"] == 8
        assert summary["gamma"] == 0.55

    def test_gamma_sweep(self, fbm_path):
        reports = gamma_sweep(fbm_path, [0.55, 0.75, 1.0], n_a=8)
        assert [r.gamma_used for r in reports] == [0.55, 0.75, 1.0]

    @pytest.mark.slow
    def test_brownian_decay_exponent(self):
        rhos = [
            estimate_rho_gamma(generate_fbm(0.5, 1, 2**16, 1.0, derive_seed(42, i)), gamma=0.55).rho_hat
            for i in range(20)
        ]
        assert 0.8 <= float(np.median(rhos)) <= 1.2

    def test_iota_from_rho(self):
        assert predicted_iota_from_rho(1.0) == 0.5
        assert predicted_iota_from_rho(0.25) == 1.0
        assert predicted_iota_from_rho(0.8) == pytest.approx(0.625)
        with pytest.raises(ValueError, match="positive"):
            predicted_iota_from_rho(0.0)


class TestInterpolation:

    def test_kappa_one_is_an_identity(self, fbm_path):
        report = estimate_rho_gamma(fbm_path)
        check = check_interpolation(report, 1.0)
        assert check.margin >= -1e-10
        assert check.lhs == pytest.approx(report.norm_estimate)

    def test_linear_path_passes(self):
        report = estimate_rho_gamma(generate_deterministic("linear", 2048, 1.0))
        assert check_interpolation(report, 0.25).passed

    @given(seed=seed_strategy, kappa=st.sampled_from([0.25, 0.5, 0.75]))
    @settings(max_examples=20, deadline=None)
    def test_fbm_paths_always_pass(self, seed, kappa):
        report = estimate_rho_gamma(generate_fbm(0.5, 1, 1024, 1.0, seed), n_a=16)
        check = check_interpolation(report, kappa)
        assert check.passed, f"margin {check.margin}"
        assert check.gamma == pytest.approx(1 - kappa * (1 - 0.55))

    def test_kappa_range(self, fbm_path):
        with pytest.raises(ValueError, match="kappa"):
            check_interpolation(estimate_rho_gamma(fbm_path, n_a=8), 0.0)


class TestScalingIndex:

    def test_linear_path_has_index_one(self):
        p = generate_deterministic("linear", 2048, 1.0)
        est = estimate_iota(p, alphas=[-0.5], lambda_min=4.0, lambda_max=1024.0)
        assert 0.95 <= est.iota_hat <= 1.05
        assert not est.flagged

    def test_scaling_the_path_keeps_the_index(self, fbm_path):
        a = estimate_iota(fbm_path, alphas=[-0.5])
        b = estimate_iota(scale_path(fbm_path, 3.0), alphas=[-0.5])
        assert b.iota_hat == pytest.approx(a.iota_hat, abs=1e-9)
        ratio = b.integrals / a.integrals
        assert np.allclose(ratio, 3.0 ** -0.5, rtol=1e-9)

    def test_integrals_decrease_in_lambda(self, fbm_path):
        integrals, zero_fraction = scaling_integrals(fbm_path, -0.5, [4.0, 16.0, 64.0])
        assert np.all(np.diff(integrals) < 0)
        assert zero_fraction == 0.0

    def test_zero_path_is_rejected(self):
        with pytest.raises(ValueError, match="no nonzero increments"):
            estimate_iota(zero_path(64))

    def test_argument_ranges(self, fbm_path):
        with pytest.raises(ValueError, match="alpha"):
            estimate_iota(fbm_path, alphas=[-0.95])
        with pytest.raises(ValueError, match="lambda range"):
            estimate_iota(fbm_path, lambda_min=4.0, lambda_max=32.0)
        with pytest.raises(ValueError, match="lambda_min"):
            estimate_iota(fbm_path, lambda_min=0.5)

    def test_summary_and_csv(self, tmp_path, fbm_path):
        est = estimate_iota(fbm_path, n_lambda=4)
        summary = iota_summary(est, rho_hat=1.0)
        assert summary["iota_from_rho"] == 0.5
        assert len(summary["per_alpha"]) == 3
        assert write_iota_csv(est, tmp_path / "iota.csv") == 3 * 4

    @pytest.mark.slow
    @pytest.mark.parametrize("hurst", [0.25, 0.5, 0.75])
    def test_fbm_index_tracks_hurst(self, hurst):
        estimates = [
            estimate_iota(generate_fbm(hurst, 1, 2048, 1.0, derive_seed(42, i))).iota_hat
            for i in range(20)
        ]
        assert abs(float(np.median(estimates)) - hurst) <= 0.1


class TestAveraging:

    def setup_method(self):
        self.v = np.linspace(0.0, 1.0, 1025)
        self.ones = np.ones_like(self.v)

    def test_flat_densities_stay_bounded(self):
        n_list = [2**k for k in range(1, 9)]
        check = check_averaging_bound(self.ones, self.ones, self.v, self.v, 0.5, n_list)
        assert check.max_ratio <= 4.0
        assert check.nondegeneracy_c == pytest.approx(1.0)

    def test_first_frequency_obeys_the_pointwise_bound(self):
        check = check_averaging_bound(self.ones, self.ones, self.v, self.v, 0.5, [1])
        assert check.lhs[0] <= check.l1_product + 1e-12

    def test_narrow_bump(self):
        bump = np.exp(-(((self.v - 0.5) / 0.02) ** 2))
        bump /= trapezoid(bump, self.v)
        check = check_averaging_bound(bump, bump, self.v, self.v, 0.5, [2, 8, 32, 128])
        assert np.all(np.isfinite(check.ratios))
        assert check.max_ratio < 50.0

    def test_degenerate_speed(self):
        with pytest.raises(ValueError, match="degenerate"):
            check_averaging_bound(self.ones, self.ones, self.v, np.ones_like(self.v), 0.5, [2])

    def test_argument_checks(self):
        with pytest.raises(ValueError, match="rho"):
            check_averaging_bound(self.ones, self.ones, self.v, self.v, 1.0, [2])
        with pytest.raises(ValueError, match="nonzero"):
            check_averaging_bound(self.ones, self.ones, self.v, self.v, 0.5, [0])
        with pytest.raises(ValueError, match="nonnegative"):
            check_averaging_bound(-self.ones, self.ones, self.v, self.v, 0.5, [2])
