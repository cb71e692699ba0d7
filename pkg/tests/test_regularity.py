"""
Moduli of continuity, fitted exponents, seminorms and the predicted thresholds

Framework: pytest + hypothesis
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regularity import (
    besov_exponent,
    default_levels,
    exponents_table,
    gagliardo_seminorm,
    interplay_pairs,
    l1_modulus,
    predicted_iota_from_rho,
    predicted_lambda_fbm,
    predicted_lambda_main,
    predicted_s_star,
    seminorm_from_modulus,
    shift_l1,
    theorem_bound_terms,
    time_averaged_modulus,
    with_gagliardo,
)
from solver import constant, entropy_defect, lacunary, sine, solve_rough


def step_seminorm(lam):
    """Closed form for the indicator of half the torus, whose modulus is 2h"""
    return 4.0 * 0.5 ** (1.0 - lam) / (1.0 - lam)


class TestModulus:

    def test_step_modulus_is_twice_the_lag(self, step_field):
        curve = l1_modulus(step_field)
        assert curve.lags.size == default_levels(1024) == 10
        assert np.allclose(curve.omega, 2.0 * curve.lags, rtol=0.0, atol=1e-15)
        assert curve.field_l1 == 0.5

    def test_sine_modulus(self):
        curve = l1_modulus(sine(1.0, 1, 1024))
        small = curve.lags <= 1.0 / 64
        assert np.allclose(curve.omega[small], 4.0 * curve.lags[small], rtol=0.02)

    def test_constant_field(self):
        curve = l1_modulus(constant(0.7, 256))
        assert np.all(curve.omega == 0.0)

    @given(shift=st.integers(min_value=0, max_value=255), seed=st.integers(min_value=0, max_value=1000))
    @settings(max_examples=30, deadline=None)
    def test_shift_is_bounded_by_twice_the_norm(self, shift, seed):
        u = np.random.default_rng(seed).normal(size=256)
        assert shift_l1(u, shift) <= 2.0 * np.abs(u).mean() + 1e-12

    def test_level_checks(self, step_field):
        with pytest.raises(ValueError, match="at least 4"):
            l1_modulus(step_field, 3)
        with pytest.raises(ValueError, match="exceeds"):
            l1_modulus(step_field, 11)
        with pytest.raises(ValueError, match="finite"):
            l1_modulus(np.array([0.0, np.inf, 1.0, 2.0]))

    def test_time_average(self, burgers, linear_path):
        sol = solve_rough(burgers, linear_path, sine(0.1, 1, 64), 64, output_times=[0.0, 0.5, 1.0])
        curve = time_averaged_modulus(sol)
        assert curve.time_averaged
        expected = 0.5 * (l1_modulus(sol.u[1]).omega + l1_modulus(sol.u[2]).omega)
        assert np.allclose(curve.omega, expected)

    def test_time_average_needs_positive_times(self, burgers, linear_path):
        sol = solve_rough(burgers, linear_path, sine(0.1, 1, 64), 64, output_times=[0.0])
        with pytest.raises(ValueError, match="t > 0"):
            time_averaged_modulus(sol)


class TestBesovExponent:

    def test_step_has_exponent_one(self, step_field):
        report = besov_exponent(l1_modulus(step_field))
        assert report.lambda_hat == pytest.approx(1.0, abs=1e-9)
        assert not report.smooth

    def test_constant_field_is_smooth(self):
        report = besov_exponent(l1_modulus(constant(0.7, 1024)))
        assert report.lambda_hat == 1.0
        assert report.smooth

    @pytest.mark.parametrize("lambda0", [0.3, 0.5, 0.7])
    def test_lacunary_series(self, lambda0):
        curve = l1_modulus(lacunary(lambda0, 14, 2**16))
        report = besov_exponent(curve, fit_lo=2.0**-10, fit_hi=2.0**-4)
        assert report.lambda_hat == pytest.approx(lambda0, abs=0.1)

    def test_lacunary_exponents_are_ordered(self):
        hats = [
            besov_exponent(l1_modulus(lacunary(lam, 14, 2**16)), 2.0**-10, 2.0**-4).lambda_hat
            for lam in (0.3, 0.5, 0.7)
        ]
        assert hats[0] < hats[1] < hats[2]

    def test_fit_needs_four_lags(self):
        with pytest.raises(ValueError, match="need at least 4"):
            besov_exponent(l1_modulus(sine(1.0, 1, 64)))


class TestSeminorm:

    @pytest.mark.parametrize("lam", [0.1, 0.5, 0.9])
    def test_step_closed_form(self, step_field, lam):
        assert gagliardo_seminorm(step_field, lam) == pytest.approx(step_seminorm(lam), rel=1e-9)

    @pytest.mark.parametrize("lam", [0.1, 0.5, 0.9])
    def test_dyadic_route_agrees_on_the_step(self, step_field, lam):
        curve = l1_modulus(step_field)
        assert seminorm_from_modulus(curve, lam) == pytest.approx(gagliardo_seminorm(step_field, lam), rel=1e-9)

    def test_constant_field_has_zero_seminorm(self):
        assert gagliardo_seminorm(constant(0.7, 128), 0.5) == 0.0

    def test_seminorm_grows_with_lambda(self):
        u = lacunary(0.5, 8, 1024)
        assert gagliardo_seminorm(u, 0.3) < gagliardo_seminorm(u, 0.6)

    def test_lambda_range(self, step_field):
        with pytest.raises(ValueError, match="lambda must lie"):
            gagliardo_seminorm(step_field, 0.99)

    def test_with_gagliardo(self, step_field):
        report = with_gagliardo(besov_exponent(l1_modulus(step_field)), step_field, [0.5])
        assert report.gagliardo[0][0] == 0.5
        assert report.gagliardo[0][1] == pytest.approx(step_seminorm(0.5), rel=1e-9)


class TestPredictions:

    def test_main_threshold_values(self):
        assert predicted_lambda_main(1.0, 1.0, 1.0, 1.0) == pytest.approx(1.0)
        assert predicted_lambda_main(1.0, 0.55, 0.5, 1.0) == pytest.approx(1.05 / 1.95)

    def test_main_threshold_grows_with_gamma(self):
        values = [predicted_lambda_main(0.8, g, 0.5, 1.0) for g in (0.55, 0.7, 0.85, 1.0)]
        assert values == sorted(values)

    def test_fbm_threshold_values(self):
        assert predicted_lambda_fbm(0.5, 1.0) == pytest.approx(0.5)
        assert predicted_lambda_fbm(0.25, 1.0) == pytest.approx(2.0 / 3.0)

    @pytest.mark.parametrize("hurst", [0.1, 0.25, 0.4, 0.5])
    def test_fbm_threshold_matches_the_main_one(self, hurst):
        main = predicted_lambda_main(1.0 / (2.0 * hurst), 0.5, hurst, 1.0)
        assert main == pytest.approx(predicted_lambda_fbm(hurst, 1.0))
        assert predicted_lambda_fbm(hurst, 1.0) == pytest.approx(1.0 / (1.0 + 2.0 * hurst))

    @pytest.mark.parametrize("hurst", [0.1, 0.3, 0.6, 0.9])
    def test_main_threshold_never_exceeds_the_fbm_one(self, hurst):
        main = predicted_lambda_main(1.0 / (2.0 * hurst), 0.5, hurst, 2.0)
        assert main <= predicted_lambda_fbm(hurst, 2.0) + 1e-12

    def test_s_star(self):
        assert predicted_s_star(0.5, 0.5) == pytest.approx(0.5)
        assert predicted_s_star(1.0, 1.0) == pytest.approx(1.0 / 3.0)
        with pytest.raises(ValueError, match="iota"):
            predicted_s_star(0.5, 0.4)

    def test_interplay(self):
        assert interplay_pairs(0.5, 1.0, 0.5).nu2 == pytest.approx(1.0)
        result = interplay_pairs(0.5, 1.0, 0.25)
        assert result.nu2 == pytest.approx(1.4)
        assert result.feasible
        assert not interplay_pairs(0.25, 1.0, 0.9).feasible

    def test_argument_checks(self):
        with pytest.raises(ValueError, match="H must lie"):
            predicted_lambda_fbm(1.0, 1.0)
        with pytest.raises(ValueError, match="nu must be at least 1"):
            predicted_lambda_fbm(0.5, 0.5)
        with pytest.raises(ValueError, match="rho must be positive"):
            predicted_lambda_main(0.0, 0.5, 0.5, 1.0)

    def test_exponents_table(self):
        rows = exponents_table([0.25, 0.5], 1.0)
        assert [r["H"] for r in rows] == [0.25, 0.5]
        assert set(rows[0]) == {"H", "nu", "lambda_fbm", "s_star", "one_over_1_plus_2H"}
        assert len(exponents_table()) == 9

    def test_iota_from_rho_is_shared(self):
        assert predicted_iota_from_rho(0.5) == 1.0


class TestBoundTerms:

    def test_constant_solution(self, burgers, linear_path):
        sol = solve_rough(burgers, linear_path, constant(0.7, 64), 64)
        m = entropy_defect(sol, burgers, linear_path)
        terms = theorem_bound_terms(sol, m, linear_path, 1.0)
        assert terms.u0_l1 == pytest.approx(0.7)
        assert terms.u_l1_tx == pytest.approx(0.7)
        assert terms.holder_seminorm == pytest.approx(1.0)
        assert terms.measure_term == 0.0

    def test_path_mismatch(self, burgers, linear_path, fbm_path):
        sol = solve_rough(burgers, linear_path, constant(0.7, 64), 64)
        m = entropy_defect(sol, burgers, linear_path)
        with pytest.raises(ValueError, match="computed with path"):
            theorem_bound_terms(sol, m, fbm_path, 0.5)
