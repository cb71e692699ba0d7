"""
Driving-path property tests

Framework: pytest + hypothesis
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rough_paths import (
    SampledPath,
    derive_seed,
    generate_brownian,
    generate_deterministic,
    generate_fbm,
    generate_weierstrass,
    holder_exponent,
    holder_seminorm,
    read_path,
    scale_path,
    shift_path,
    sum_paths,
    write_path,
)


hurst_strategy = st.floats(min_value=0.05, max_value=0.95, allow_nan=False)
seed_strategy = st.integers(min_value=0, max_value=2**64 - 1)
steps_strategy = st.integers(min_value=8, max_value=256)


def fbm_covariance(s, t, hurst):
    return 0.5 * (s ** (2 * hurst) + t ** (2 * hurst) - abs(t - s) ** (2 * hurst))


class TestSampledPath:

    def test_rejects_nonzero_start(self):
        with pytest.raises(ValueError, match="origin"):
            SampledPath(dim=1, horizon=1.0, n_steps=2, values=[1.0, 2.0, 3.0], kind="custom")

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="shape"):
            SampledPath(dim=1, horizon=1.0, n_steps=4, values=[0.0, 1.0], kind="custom")

    def test_values_are_read_only(self, linear_path):
        with pytest.raises(ValueError):
            linear_path.values[1, 0] = 5.0

    def test_index_of_rejects_times_outside_horizon(self, linear_path):
        assert linear_path.index_of(0.5) == 128
        with pytest.raises(ValueError, match="outside"):
            linear_path.index_of(1.5)


class TestFbmGenerator:

    @given(hurst=hurst_strategy, seed=seed_strategy, n_steps=steps_strategy)
    @settings(max_examples=30, deadline=None)
    def test_same_inputs_give_identical_paths(self, hurst, seed, n_steps):
        p = generate_fbm(hurst, 1, n_steps, 1.0, seed)
        q = generate_fbm(hurst, 1, n_steps, 1.0, seed)
        assert np.array_equal(p.values, q.values)
        assert p.values.shape == (n_steps + 1, 1)
        assert p.values[0, 0] == 0.0

    def test_different_seeds_differ(self):
        p = generate_fbm(0.3, 1, 128, 1.0, 1)
        q = generate_fbm(0.3, 1, 128, 1.0, 2)
        assert not np.array_equal(p.values, q.values)

    def test_components_are_independent_draws(self):
        p = generate_fbm(0.5, 3, 256, 1.0, 11)
        assert p.dim == 3
        assert not np.array_equal(p.values[:, 0], p.values[:, 1])

    @pytest.mark.parametrize("hurst", [0.0, 1.0, -0.2, 1.3])
    def test_rejects_hurst_outside_unit_interval(self, hurst):
        with pytest.raises(ValueError, match="Hurst"):
            generate_fbm(hurst, 1, 64, 1.0, 0)

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError, match="n_steps"):
            generate_fbm(0.5, 1, 1, 1.0, 0)
        with pytest.raises(ValueError, match="horizon"):
            generate_fbm(0.5, 1, 64, 0.0, 0)
        with pytest.raises(ValueError, match="seed"):
            generate_fbm(0.5, 1, 64, 1.0, -1)

    @pytest.mark.slow
    @pytest.mark.parametrize("hurst", [0.25, 0.5, 0.75])
    def test_empirical_covariance_matches_fbm(self, hurst):
        n_steps, n_paths = 1024, 10_000
        pairs = [(0.25, 0.25), (0.5, 0.5), (1.0, 1.0), (0.5, 1.0), (0.75, 1.0)]
        idx = {t: int(t * n_steps) for pair in pairs for t in pair}
        samples = {t: np.empty(n_paths) for t in idx}
        for i in range(n_paths):
            values = generate_fbm(hurst, 1, n_steps, 1.0, derive_seed(42, i)).scalar
            for t, k in idx.items():
                samples[t][i] = values[k]
        for s, t in pairs:
            expected = fbm_covariance(s, t, hurst)
            got = float(np.mean(samples[s] * samples[t]))
            assert got == pytest.approx(expected, rel=0.05), f"H={hurst}, (s,t)=({s},{t})"

    @pytest.mark.parametrize("hurst", [0.25, 0.75])
    def test_increment_variance_does_not_depend_on_start(self, hurst):
        n_steps, n_paths = 256, 2000
        paths = np.array([
            generate_fbm(hurst, 1, n_steps, 1.0, derive_seed(7, i)).scalar for i in range(n_paths)
        ])
        for lag in (1, 8):
            expected = (lag / n_steps) ** (2 * hurst)
            variances = []
            for k in (0, 64, 128, n_steps - lag):
                v = float(np.var(paths[:, k + lag] - paths[:, k]))
                assert v == pytest.approx(expected, rel=0.15), f"lag={lag}, k={k}"
                variances.append(v)
            assert max(variances) / min(variances) < 1.25, f"lag={lag}: {variances}"


class TestOtherGenerators:

    def test_linear_path_values(self):
        p = generate_deterministic("linear", 4, 1.0)
        assert np.allclose(p.scalar, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_linear_path_ends_at_horizon(self):
        p = generate_deterministic("linear", 1024, 2.0)
        assert p.scalar[-1] == 2.0

    def test_custom_zero_path(self):
        p = generate_deterministic("custom", 16, 1.0, values=np.zeros(17))
        assert np.all(p.values == 0.0)

    def test_custom_path_is_shifted_to_origin(self):
        p = generate_deterministic("custom", 2, 1.0, values=[3.0, 4.0, 1.0])
        assert np.array_equal(p.scalar, [0.0, 1.0, -2.0])

    def test_custom_path_needs_all_samples(self):
        with pytest.raises(ValueError, match="N\\+1"):
            generate_deterministic("custom", 4, 1.0, values=[0.0, 1.0])

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown"):
            generate_deterministic("zigzag", 4, 1.0)

    def test_brownian_increments_have_grid_variance(self):
        p = generate_brownian(1, 20_000, 2.0, 5)
        assert p.hurst == 0.5
        assert np.var(p.increments()) == pytest.approx(2.0 / 20_000, rel=0.05)

    def test_weierstrass_path_is_deterministic(self):
        p = generate_weierstrass(0.4, 256, 1.0)
        q = generate_weierstrass(0.4, 256, 1.0)
        assert np.array_equal(p.values, q.values)
        assert p.alpha == 0.4 and p.seed is None

    def test_weierstrass_rejects_bad_alpha(self):
        with pytest.raises(ValueError, match="alpha"):
            generate_weierstrass(1.0, 256, 1.0)


class TestPathArithmetic:

    def test_adding_the_zero_path(self, fbm_path):
        zero = generate_deterministic("custom", fbm_path.n_steps, 1.0, values=np.zeros(fbm_path.n_steps + 1))
        assert np.array_equal(sum_paths(fbm_path, zero).values, fbm_path.values)

    def test_linear_plus_linear(self, linear_path):
        total = sum_paths(linear_path, linear_path)
        assert np.allclose(total.scalar, 2.0 * linear_path.times)

    def test_fbm_plus_linear_is_elementwise(self):
        p = generate_fbm(0.5, 1, 512, 1.0, seed=1)
        q = generate_deterministic("linear", 512, 1.0)
        total = sum_paths(p, q)
        for k in range(513):
            assert total.scalar[k] == p.scalar[k] + q.scalar[k]

    @given(seeds=st.tuples(seed_strategy, seed_strategy, seed_strategy))
    @settings(max_examples=20, deadline=None)
    def test_sums_are_exactly_associative_and_commutative(self, seeds):
        p, q, r = (generate_fbm(0.4, 1, 64, 1.0, s) for s in seeds)
        left = sum_paths(sum_paths(p, q), r)
        right = sum_paths(p, sum_paths(q, r))
        swapped = sum_paths(r, sum_paths(q, p))
        assert np.array_equal(left.values, right.values)
        assert np.array_equal(left.values, swapped.values)

    def test_sum_ref_names_its_summands(self):
        drift = generate_deterministic("linear", 64, 1.0)
        a = sum_paths(drift, generate_fbm(0.5, 1, 64, 1.0, seed=1))
        b = sum_paths(drift, generate_fbm(0.5, 1, 64, 1.0, seed=2))
        assert a.ref != b.ref
        assert "seed=1" in a.ref and "seed=2" in b.ref
        assert a.ref == sum_paths(generate_fbm(0.5, 1, 64, 1.0, seed=1), drift).ref

    def test_scaled_paths_have_distinct_refs(self, fbm_path):
        assert scale_path(fbm_path, 2.0).ref != scale_path(fbm_path, 3.0).ref

    def test_grid_mismatch(self):
        with pytest.raises(ValueError, match="grid mismatch"):
            sum_paths(generate_deterministic("linear", 8, 1.0), generate_deterministic("linear", 16, 1.0))

    def test_scale_path(self, fbm_path):
        assert np.array_equal(scale_path(fbm_path, 3.0).values, 3.0 * fbm_path.values)

    def test_shift_path_is_the_increment_path(self, fbm_path):
        shifted = shift_path(fbm_path, 0.25)
        i = fbm_path.index_of(0.25)
        assert shifted.n_steps == fbm_path.n_steps - i
        assert shifted.horizon == pytest.approx(0.75)
        assert np.array_equal(shifted.values, fbm_path.values[i:] - fbm_path.values[i])

    def test_shift_to_horizon_is_rejected(self, linear_path):
        with pytest.raises(ValueError, match="no grid step"):
            shift_path(linear_path, 1.0)


class TestSeeds:

    def test_derive_seed_is_stable_and_distinct(self):
        seeds = [derive_seed(42, i) for i in range(100)]
        assert seeds == [derive_seed(42, i) for i in range(100)]
        assert len(set(seeds)) == 100
        assert all(0 <= s < 2**64 for s in seeds)
        assert derive_seed(42, 0) != derive_seed(43, 0)


class TestHolder:

    def test_linear_path_has_exponent_one(self):
        est = holder_exponent(generate_deterministic("linear", 1024, 1.0))
        assert est.eta_hat == pytest.approx(1.0, abs=0.01)
        assert not est.degenerate

    def test_constant_path_is_degenerate(self):
        est = holder_exponent(generate_deterministic("custom", 256, 1.0, values=np.zeros(257)))
        assert est.eta_hat == 1.0
        assert est.degenerate

    def test_levels_must_fit_the_grid(self, linear_path):
        with pytest.raises(ValueError, match="exceeds"):
            holder_exponent(linear_path, 9)
        with pytest.raises(ValueError, match="at least 3"):
            holder_exponent(linear_path, 2)

    def test_modulus_rows_are_dyadic(self, fbm_path):
        est = holder_exponent(fbm_path, 6)
        assert est.modulus.shape == (6, 2)
        assert np.allclose(est.modulus[:, 0], 2.0 ** np.arange(6) / 1024)

    @pytest.mark.slow
    def test_brownian_paths_are_half_holder(self):
        estimates = [
            holder_exponent(generate_fbm(0.5, 1, 2**16, 1.0, derive_seed(42, i))).eta_hat
            for i in range(20)
        ]
        assert 0.42 <= float(np.median(estimates)) <= 0.52

    def test_seminorm_of_linear_path(self, linear_path):
        assert holder_seminorm(linear_path, 1.0) == pytest.approx(1.0)
        # |t - s|^{1/2} is largest at the full horizon
        assert holder_seminorm(linear_path, 0.5) == pytest.approx(1.0)

    def test_seminorm_rejects_bad_eta(self, linear_path):
        with pytest.raises(ValueError, match="eta"):
            holder_seminorm(linear_path, 0.0)


class TestPathFiles:

    def test_write_then_read_is_lossless(self, tmp_path, fbm_path):
        back = read_path(write_path(fbm_path, tmp_path / "p.txt"))
        assert np.array_equal(back.values, fbm_path.values)
        assert (back.kind, back.hurst, back.seed, back.n_steps) == ("fbm", 0.5, 7, 1024)

    def test_header_layout(self, tmp_path):
        path = write_path(generate_weierstrass(0.3, 8, 1.0), tmp_path / "g.txt")
        header = path.read_text().splitlines()[0]
        assert header == "# weierstrass 0.29999999999999999 1 8 1 -"
        assert read_path(path).alpha == pytest.approx(0.3)

    def test_missing_header(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 0\n1 1\n")
        with pytest.raises(ValueError, match="header"):
            read_path(bad)
