"""
Command-line entry point: python -m harness <command> [options]

Exit codes: 0 success, 1 configuration error, 2 numerical-invariant violation.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add parent directory to path
parent_dir = Path(__file__).parent.parent
sys.path.insert(0, str(parent_dir))

from regularity import exponents_table
from utils.errors import ConfigError, NumericalInvariantError

from harness.config import (
    ENV_DOC,
    ExperimentConfig,
    config_from_dict,
    config_schema,
    load_config,
    to_ini,
)
from harness.presets import PRESETS, preset
from harness.runner import ExperimentRunner

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

SUBCOMMAND_KINDS = {
    "paths": "paths",
    "irregularity": "irregularity",
    "iota": "iota",
    "solve": "solve",
    "regularity": "regularity-sweep",
    "weakform": "weakform",
}


def _float_list(raw: str) -> List[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{raw}'") from None


def _base_config(args: argparse.Namespace) -> Dict[str, Any]:
    config = load_config(args.config) if getattr(args, "config", None) else ExperimentConfig()
    return config.model_dump()


def _apply_common(data: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    if args.seed is not None:
        data["harness"]["master_seed"] = args.seed
    if args.out is not None:
        data["harness"]["output_dir"] = args.out
    return data


def _apply_experiment_flags(data: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    path, solver = data["path"], data["solver"]
    if args.ensemble is not None:
        data["harness"]["ensemble_size"] = args.ensemble
    if args.path_kind is not None:
        path["kind"] = args.path_kind
    if args.hurst is not None:
        if len(args.hurst) == 1:
            path["hurst"], path["hursts"] = args.hurst[0], []
        else:
            path["hursts"] = args.hurst
    if args.n_steps is not None:
        path["n_steps"] = args.n_steps
    if args.horizon is not None:
        path["horizon"] = args.horizon
    if args.drift is not None:
        path["drift"] = args.drift
    for key in ("nx", "u0", "scheme"):
        value = getattr(args, key, None)
        if value is not None:
            solver[key] = value
    if getattr(args, "flux", None) is not None:
        solver["flux_coeffs"] = args.flux
    if getattr(args, "gamma", None) is not None:
        data["irregularity"]["gamma"] = args.gamma
    if getattr(args, "gammas", None) is not None:
        data["irregularity"]["gammas"] = args.gammas
    if getattr(args, "compare_rho", False):
        data["iota"]["compare_rho"] = True
    if getattr(args, "no_plots", False):
        data["harness"]["plots"] = False
    return data


def _run(config: ExperimentConfig) -> int:
    manifest = ExperimentRunner(config).run()
    print(f"[OK] Run '{config.run_name}' {manifest.status}: {len(manifest.inventory)} files")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    data = _base_config(args)
    data["harness"]["kind"] = SUBCOMMAND_KINDS[args.command]
    data = _apply_common(_apply_experiment_flags(data, args), args)
    return _run(config_from_dict(data))


def cmd_exponents(args: argparse.Namespace) -> int:
    rows = exponents_table(args.hursts, args.nu)
    print(f"{'H':>6} {'lambda_fbm':>11} {'1/(1+2H)':>9} {'s_star':>8}")
    for row in rows:
        print(
            f"{row['H']:>6.3f} {row['lambda_fbm']:>11.6f} "
            f"{row['one_over_1_plus_2H']:>9.6f} {row['s_star']:>8.6f}"
        )
    if args.out is None:
        return EXIT_OK
    data = ExperimentConfig().model_dump()
    data["harness"]["kind"] = "exponents"
    data["regularity"]["table_hursts"] = args.hursts
    data["regularity"]["nu"] = args.nu
    return _run(config_from_dict(_apply_common(data, args)))


def cmd_run(args: argparse.Namespace) -> int:
    data = _apply_common(load_config(args.config_file).model_dump(), args)
    return _run(config_from_dict(data))


def cmd_preset(args: argparse.Namespace) -> int:
    try:
        config = preset(args.name)
    except ValueError as e:
        raise ConfigError("preset", str(e)) from None
    config = config_from_dict(_apply_common(config.model_dump(), args))
    if not args.run:
        print(to_ini(config), end="")
        return EXIT_OK
    return _run(config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harness",
        description="Regularization-by-noise experiments for rough-flux conservation laws",
    )
    parser.add_argument("--schema", action="store_true", help="Print the configuration JSON schema")
    parser.add_argument(
        "--threads-env-doc", action="store_true", help="Document the environment variables"
    )
    sub = parser.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Master seed")
    common.add_argument("--out", type=str, default=None, help="Output directory")

    experiment = argparse.ArgumentParser(add_help=False, parents=[common])
    experiment.add_argument("--config", type=str, default=None, help="Base INI configuration")
    experiment.add_argument("--ensemble", type=int, default=None)
    experiment.add_argument(
        "--path-kind", choices=["fbm", "brownian", "linear", "weierstrass"], default=None
    )
    experiment.add_argument("--hurst", type=_float_list, default=None, help="H or a comma list")
    experiment.add_argument("--n-steps", type=int, default=None)
    experiment.add_argument("--horizon", type=float, default=None)
    experiment.add_argument("--drift", type=float, default=None)
    experiment.add_argument("--no-plots", action="store_true")

    solver_flags = argparse.ArgumentParser(add_help=False)
    solver_flags.add_argument("--nx", type=int, default=None)
    solver_flags.add_argument("--u0", choices=["riemann", "sine", "lacunary", "constant"], default=None)
    solver_flags.add_argument("--flux", type=_float_list, default=None, help="Ascending coefficients of A")
    solver_flags.add_argument("--scheme", choices=["engquist_osher", "godunov"], default=None)

    sub.add_parser("paths", parents=[experiment], help="Generate path ensembles").set_defaults(
        func=cmd_experiment
    )
    p_irr = sub.add_parser("irregularity", parents=[experiment], help="Estimate (rho, gamma)")
    p_irr.add_argument("--gamma", type=float, default=None)
    p_irr.add_argument("--gammas", type=_float_list, default=None, help="γ sweep")
    p_irr.set_defaults(func=cmd_experiment)
    p_iota = sub.add_parser("iota", parents=[experiment], help="Estimate the scaling index")
    p_iota.add_argument("--compare-rho", action="store_true", help="Record 1/(2 rho_hat) too")
    p_iota.set_defaults(func=cmd_experiment)
    for name, help_text in (
        ("solve", "Solve and extract the entropy defect"),
        ("regularity", "Fit the time-averaged Besov exponent of solutions"),
        ("weakform", "Check the transported weak formulation"),
    ):
        sub.add_parser(name, parents=[experiment, solver_flags], help=help_text).set_defaults(
            func=cmd_experiment
        )

    p_exp = sub.add_parser("exponents", parents=[common], help="Print predicted exponents")
    p_exp.add_argument(
        "--hursts", type=_float_list, default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    )
    p_exp.add_argument("--nu", type=float, default=1.0)
    p_exp.set_defaults(func=cmd_exponents)

    p_run = sub.add_parser("run", parents=[common], help="Run an INI configuration")
    p_run.add_argument("config_file")
    p_run.set_defaults(func=cmd_run)

    p_pre = sub.add_parser("preset", parents=[common], help="Print (or run) a named configuration")
    p_pre.add_argument("name", help=f"One of {sorted(PRESETS)}")
    p_pre.add_argument("--run", action="store_true")
    p_pre.set_defaults(func=cmd_preset)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads_env_doc:
        print(ENV_DOC, end="")
        return EXIT_OK
    if args.schema:
        print(json.dumps(config_schema(), indent=2, sort_keys=True))
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    try:
        return args.func(args)
    except NumericalInvariantError as e:
        print(f"[ERROR] Numerical invariant: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"[ERROR] Configuration error: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
