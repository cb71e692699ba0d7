"""
Configuration, presets, run manifests, the experiment runner and the CLI

Framework: pytest
"""
import copy

import numpy as np
import pytest

import harness.cli as cli
from harness import (
    EXPERIMENTS,
    PRESETS,
    ConfigError,
    ExperimentRunner,
    ManifestStore,
    NumericalInvariantError,
    PathSpec,
    build_path,
    config_from_dict,
    generate_ensemble,
    load_config,
    path_groups,
    preset,
    read_manifest,
    to_ini,
    worker_count,
)
from harness.config import output_dir_for
from harness.experiments import (
    Experiment,
    finalize_regularity,
    lower_bound_consistent,
    non_increasing_or_flat,
)
from harness.run_manifest import MANIFEST_FILE
from regularity import predicted_lambda_fbm
from utils.tables import read_csv, read_json


def small_config(kind, out_dir, **sections):
    data = {
        "harness": {"kind": kind, "ensemble_size": 3, "master_seed": 42, "output_dir": str(out_dir), "plots": False},
        "path": {"kind": "fbm", "hurst": 0.5, "n_steps": 64},
        "solver": {"nx": 32, "u0": "sine", "amp": 0.2, "n_outputs": 3},
        "kinetic": {"n_levels": 16, "max_blocks": 4},
    }
    for name, values in sections.items():
        data.setdefault(name, {}).update(values)
    return config_from_dict(data)


def output_bytes(out_dir):
    return {
        p.relative_to(out_dir).as_posix(): p.read_bytes()
        for p in sorted(out_dir.rglob("*"))
        if p.is_file() and p.name != MANIFEST_FILE
    }


class TestConfig:

    def test_defaults_validate(self):
        config = config_from_dict({})
        assert config.run_name == "paths"
        assert config.solver.flux_coeffs == [0.0, 0.0, 0.5]

    def test_unknown_section(self):
        with pytest.raises(ConfigError) as err:
            config_from_dict({"plotting": {}})
        assert err.value.field == "plotting"

    def test_field_errors_name_the_field(self):
        with pytest.raises(ConfigError) as err:
            config_from_dict({"path": {"hurst": 1.5}})
        assert err.value.field == "path.hurst"
        assert str(err.value).startswith("path.hurst: ")

    def test_too_few_path_steps(self):
        with pytest.raises(ConfigError, match="path.n_steps"):
            config_from_dict({"path": {"n_steps": 4}})

    def test_regularity_fit_needs_enough_lags(self):
        with pytest.raises(ConfigError, match="regularity.fit_lo"):
            config_from_dict({"harness": {"kind": "regularity-sweep"}, "solver": {"nx": 256}})
        assert config_from_dict({"harness": {"kind": "regularity-sweep"}, "solver": {"nx": 512}})

    def test_solver_runs_need_a_real_flux(self):
        with pytest.raises(ConfigError, match="solver.flux_coeffs"):
            config_from_dict({"harness": {"kind": "solve"}, "solver": {"flux_coeffs": [1.0, 0.0]}})

    def test_scheme_is_checked(self):
        with pytest.raises(ConfigError, match="solver.scheme"):
            config_from_dict({"solver": {"scheme": "upwind"}})

    def test_iota_lambda_range(self):
        with pytest.raises(ConfigError, match="iota.lambda_max"):
            config_from_dict({"iota": {"lambda_min": 4.0, "lambda_max": 32.0}})

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_ini_round_trip(self, tmp_path, name):
        config = preset(name)
        ini = tmp_path / f"{name}.ini"
        ini.write_text(to_ini(config), encoding="utf-8")
        assert load_config(ini).model_dump() == config.model_dump()

    def test_ini_unknown_key(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[path]\nsteps = 10\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="path.steps"):
            load_config(ini)

    def test_missing_ini(self, tmp_path):
        with pytest.raises(ConfigError, match="file not found"):
            load_config(tmp_path / "absent.ini")

    def test_worker_count(self, monkeypatch):
        monkeypatch.setenv("ROUGHREG_WORKERS", "3")
        assert worker_count() == 3
        for bad in ("0", "many"):
            monkeypatch.setenv("ROUGHREG_WORKERS", bad)
            with pytest.raises(ConfigError, match="ROUGHREG_WORKERS"):
                worker_count()

    def test_output_dir_follows_the_environment(self, quiet_env):
        config = config_from_dict({"harness": {"name": "trial"}})
        assert output_dir_for(config) == quiet_env / "outputs" / "trial"

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset("exp-everything")


class TestPathGroups:

    def test_sweep_with_paired_linear_group(self):
        config = config_from_dict({
            "harness": {"paired_deterministic": True},
            "path": {"hursts": [0.25, 0.5]},
        })
        groups = path_groups(config)
        assert [g.label for g in groups] == ["linear", "fbm_H0.25", "fbm_H0.5"]
        assert [g.stochastic for g in groups] == [False, True, True]

    def test_drift_is_added(self):
        p = build_path(PathSpec(kind="linear", n_steps=16, drift=2.0), seed=0)
        assert np.allclose(p.scalar, 3.0 * p.times)

    def test_ensembles_are_reproducible(self):
        spec = PathSpec(kind="fbm", hurst=0.3, n_steps=32)
        first = generate_ensemble(spec, 3, 42)
        again = generate_ensemble(spec, 3, 42)
        assert all(np.array_equal(p.values, q.values) for p, q in zip(first, again))
        assert len({p.seed for p in first}) == 3


class TestManifest:

    def test_start_and_finalize(self, tmp_path):
        store = ManifestStore(tmp_path)
        store.start({"harness": {"kind": "paths"}}, workers=2)
        assert read_manifest(tmp_path).status == "running"
        (tmp_path / "a.csv").write_text("x\n1\n")
        manifest = store.finalize("complete", {"g": [1, 2]}, {"a.csv": 1}, 0.5)
        assert manifest.inventory_paths() == ["a.csv"]
        assert read_manifest(tmp_path).seeds == {"g": [1, 2]}

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_manifest(tmp_path)


class TestRunner:

    def test_serial_runs_are_byte_identical(self, tmp_path):
        first = ExperimentRunner(small_config("solve", tmp_path / "a"), workers=1, verbose=False)
        second = ExperimentRunner(small_config("solve", tmp_path / "b"), workers=1, verbose=False)
        first.run()
        second.run()
        assert output_bytes(tmp_path / "a") == output_bytes(tmp_path / "b")

    def test_parallel_run_matches_serial(self, tmp_path):
        ExperimentRunner(small_config("paths", tmp_path / "serial"), workers=1, verbose=False).run()
        ExperimentRunner(small_config("paths", tmp_path / "pool"), workers=2, verbose=False).run()
        assert output_bytes(tmp_path / "serial") == output_bytes(tmp_path / "pool")

    def test_manifest_lists_every_output(self, tmp_path):
        out = tmp_path / "run"
        manifest = ExperimentRunner(small_config("paths", out), workers=1, verbose=False).run()
        on_disk = sorted(output_bytes(out))
        assert manifest.status == "complete"
        assert manifest.inventory_paths() == on_disk
        assert "paths/fbm_H0.5_0002.txt" in on_disk
        assert len(manifest.seeds["fbm_H0.5"]) == 3
        rows = {entry.path: entry.rows for entry in manifest.inventory}
        assert rows["paths.csv"] == 3
        assert rows["paths/fbm_H0.5_0000.txt"] == 65

    def test_deterministic_groups_run_once(self, tmp_path):
        config = small_config("iota", tmp_path, path={"kind": "linear", "n_steps": 4096})
        manifest = ExperimentRunner(config, workers=1, verbose=False).run()
        assert manifest.seeds == {"linear": [manifest.seeds["linear"][0]]}
        median = read_json(tmp_path / "summary.json")["linear"]["median_iota_hat"]
        assert 0.95 <= median <= 1.05

    def test_solve_outputs(self, tmp_path):
        ExperimentRunner(small_config("solve", tmp_path), workers=1, verbose=False).run()
        rows = read_csv(tmp_path / "solve.csv")
        assert len(rows) == 3
        assert all(int(r["violations"]) == 0 for r in rows)
        for name in ("solution_fbm_H0.5.csv", "solution_fbm_H0.5.bin", "measure_fbm_H0.5.csv"):
            assert (tmp_path / name).is_file()

    def test_irregularity_outputs(self, tmp_path):
        config = small_config(
            "irregularity", tmp_path,
            harness={"ensemble_size": 2}, path={"n_steps": 256},
            irregularity={"n_a": 8, "max_levels": 4},
        )
        manifest = ExperimentRunner(config, workers=1, verbose=False).run()
        scan = read_csv(tmp_path / "scan_fbm_H0.5.csv")
        assert list(scan[0]) == ["a", "s", "t", "abs_phi"]
        report = read_json(tmp_path / "report_fbm_H0.5.json")
        assert set(report) == {
            "rho_hat", "gamma", "norm_estimate", "fit_quality", "degenerate",
            "n_frequencies", "n_windows", "a_max",
        }
        assert report["n_frequencies"] == 8
        assert len(scan) == report["n_frequencies"] * report["n_windows"]
        rows = {entry.path: entry.rows for entry in manifest.inventory}
        assert rows["scan_fbm_H0.5.csv"] == len(scan)
        assert rows["report_fbm_H0.5.json"] == 8

    def test_regularity_outputs(self, tmp_path):
        config = small_config(
            "regularity-sweep", tmp_path,
            harness={"ensemble_size": 2}, solver={"nx": 512}, kinetic={"check_entropy": False},
        )
        ExperimentRunner(config, workers=1, verbose=False).run()
        rows = read_csv(tmp_path / "regularity.csv")
        assert len(rows) == 2
        assert all(0.0 <= float(r["lambda_hat"]) <= 1.0 for r in rows)
        assert (tmp_path / "modulus_fbm_H0.5.csv").is_file()

    def test_weakform_outputs(self, tmp_path):
        config = small_config(
            "weakform", tmp_path,
            path={"kind": "linear", "horizon": 0.25},
            solver={"nx": 64, "u0": "riemann", "ul": 1.0, "ur": -1.0, "x0": 0.5},
        )
        ExperimentRunner(config, workers=1, verbose=False).run()
        rows = read_csv(tmp_path / "weakform.csv")
        assert len(rows) == 1
        assert float(rows[0]["reduction"]) > 1.0

    def test_exponents_table_run(self, tmp_path):
        manifest = ExperimentRunner(small_config("exponents", tmp_path), workers=1, verbose=False).run()
        assert manifest.seeds == {}
        assert len(read_csv(tmp_path / "exponents.csv")) == 9

    def test_failed_run_is_recorded(self, tmp_path):
        runner = ExperimentRunner(small_config("paths", tmp_path), workers=1, verbose=False)

        def broken(config, results, out_dir):
            raise RuntimeError("disk full")

        runner.experiment = Experiment("broken", EXPERIMENTS["paths"].realize, broken)
        with pytest.raises(RuntimeError, match="disk full"):
            runner.run()
        manifest = read_manifest(tmp_path)
        assert manifest.status == "failed"
        assert manifest.error == "disk full"

    def test_negative_entropy_production_fails_the_run(self):
        rows = [{"row": {"violations": 2, "min_density": -1e-3}}, {"row": {"violations": 0}}]
        with pytest.raises(NumericalInvariantError, match="entropy-defect nonnegativity"):
            ExperimentRunner._check_entropy(rows)


class TestCli:

    def test_exponents(self, capsys):
        assert cli.main(["exponents", "--hursts", "0.25,0.5"]) == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "0.666667" in out
        assert "0.500000" in out

    def test_no_command(self, capsys):
        assert cli.main([]) == cli.EXIT_CONFIG

    def test_schema(self, capsys):
        assert cli.main(["--schema"]) == cli.EXIT_OK
        assert '"harness"' in capsys.readouterr().out

    def test_env_doc(self, capsys):
        assert cli.main(["--threads-env-doc"]) == cli.EXIT_OK
        assert "ROUGHREG_WORKERS" in capsys.readouterr().out

    def test_unknown_preset(self, capsys):
        assert cli.main(["preset", "exp-everything"]) == cli.EXIT_CONFIG
        assert "[ERROR]" in capsys.readouterr().out

    def test_preset_prints_ini(self, capsys):
        assert cli.main(["preset", "exp-weakform"]) == cli.EXIT_OK
        assert "nx = 2048" in capsys.readouterr().out

    def test_invalid_hurst(self, tmp_path, capsys):
        code = cli.main(["paths", "--hurst", "1.5", "--out", str(tmp_path)])
        assert code == cli.EXIT_CONFIG
        assert "path.hurst" in capsys.readouterr().out

    def test_paths_command(self, quiet_env, capsys):
        out = quiet_env / "cli_paths"
        code = cli.main(["paths", "--ensemble", "2", "--n-steps", "32", "--out", str(out), "--no-plots"])
        assert code == cli.EXIT_OK
        assert read_manifest(out).status == "complete"

    def test_numerical_failure_exit_code(self, monkeypatch, tmp_path, capsys):
        class FailingRunner:
            def __init__(self, config):
                pass

            def run(self):
                raise NumericalInvariantError("max principle", "range grew")

        monkeypatch.setattr(cli, "ExperimentRunner", FailingRunner)
        assert cli.main(["solve", "--out", str(tmp_path)]) == cli.EXIT_NUMERICAL
        assert "max principle violated" in capsys.readouterr().out


class TestRegularityTrend:

    @staticmethod
    def synthetic_results(lambdas, hursts=(0.25, 0.5, 0.75)):
        return [
            {
                "row": {
                    "group": f"fbm_H{h:g}", "hurst": h, "index": 0,
                    "lambda_hat": lam, "predicted_lambda": predicted_lambda_fbm(h, 1.0),
                },
                "curve": None,
            }
            for h, lam in zip(hursts, lambdas)
        ]

    def test_lower_bound_allows_the_slack(self):
        assert lower_bound_consistent(0.45, 0.5)
        assert lower_bound_consistent(0.41, 0.5)
        assert not lower_bound_consistent(0.39, 0.5)

    @pytest.mark.parametrize("medians, expected", [
        ([0.8, 0.7, 0.6], True),
        ([0.7, 0.72, 0.71], True),
        ([0.5, 0.6, 0.7], False),
        ([0.6, 0.6], True),
        ([0.9], True),
    ])
    def test_non_increasing_or_flat(self, medians, expected):
        assert non_increasing_or_flat(medians) is expected

    def test_summary_of_a_decreasing_sweep(self, tmp_path):
        config = small_config("regularity-sweep", tmp_path, solver={"nx": 512})
        finalize_regularity(config, self.synthetic_results([0.8, 0.7, 0.6]), tmp_path)
        summary = read_json(tmp_path / "summary.json")
        assert summary["trend_non_increasing_or_flat"] is True
        assert all(g["lower_bound_consistent"] for g in summary["groups"].values())

    def test_summary_flags_a_rising_sweep(self, tmp_path):
        config = small_config("regularity-sweep", tmp_path, solver={"nx": 512})
        finalize_regularity(config, self.synthetic_results([0.5, 0.6, 0.7]), tmp_path)
        summary = read_json(tmp_path / "summary.json")
        assert summary["trend_non_increasing_or_flat"] is False
        assert summary["groups"]["fbm_H0.25"]["lower_bound_consistent"] is False
        assert summary["groups"]["fbm_H0.75"]["lower_bound_consistent"] is True

    @pytest.mark.slow
    def test_regularity_sweep_matches_the_predicted_trend(self, tmp_path):
        data = copy.deepcopy(PRESETS["exp-regularity"])
        data["harness"].update({"ensemble_size": 6, "output_dir": str(tmp_path), "plots": False})
        data["solver"]["nx"] = 1024
        data["kinetic"] = {"check_entropy": False}
        manifest = ExperimentRunner(config_from_dict(data), workers=1, verbose=False).run()
        assert manifest.status == "complete"
        summary = read_json(tmp_path / "summary.json")
        groups = summary["groups"]
        assert sorted(groups) == ["fbm_H0.25", "fbm_H0.5", "fbm_H0.75"]
        for name, entry in groups.items():
            assert entry["count"] == 6
            assert entry["median_lambda_hat"] >= entry["predicted_lambda"] - 0.1, name
            assert entry["lower_bound_consistent"] is True
        medians = [groups[g]["median_lambda_hat"] for g in ("fbm_H0.25", "fbm_H0.5", "fbm_H0.75")]
        assert np.all(np.diff(medians) <= 0.0) or max(medians) - min(medians) <= 0.05
        assert summary["trend_non_increasing_or_flat"] is True
