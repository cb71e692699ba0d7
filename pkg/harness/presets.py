"""
Named configurations reproducing the headline comparisons
"""
from typing import Dict

from .config import ExperimentConfig, config_from_dict

PRESETS: Dict[str, Dict] = {
    "exp-irregularity": {
        "harness": {"kind": "irregularity", "name": "exp-irregularity", "ensemble_size": 100, "master_seed": 42},
        "path": {"kind": "fbm", "hurst": 0.5, "n_steps": 4096},
        "irregularity": {"a_max": 256.0, "n_a": 32, "gamma": 0.55, "kappas": [0.25, 0.5, 0.75]},
    },
    "exp-iota": {
        "harness": {"kind": "iota", "name": "exp-iota", "ensemble_size": 100, "master_seed": 42},
        "path": {"kind": "fbm", "hursts": [0.25, 0.5, 0.75], "n_steps": 4096},
        "iota": {"alphas": [-0.3, -0.5, -0.7], "lambda_min": 4.0, "lambda_max": 4096.0, "n_lambda": 16},
    },
    "exp-regularity": {
        "harness": {"kind": "regularity-sweep", "name": "exp-regularity", "ensemble_size": 20, "master_seed": 42},
        "path": {"kind": "fbm", "hursts": [0.25, 0.5, 0.75], "n_steps": 1024},
        "solver": {"flux_coeffs": [0.0, 0.0, 0.5], "nx": 2048, "u0": "lacunary", "lambda0": 0.3, "n_modes": 10},
    },
    "exp-det-vs-noise": {
        "harness": {
            "kind": "regularity-sweep", "name": "exp-det-vs-noise", "ensemble_size": 20,
            "master_seed": 42, "paired_deterministic": True,
        },
        "path": {"kind": "fbm", "hurst": 0.25, "n_steps": 1024},
        "solver": {"flux_coeffs": [0.0, 0.0, 0.5], "nx": 2048, "u0": "lacunary", "lambda0": 0.3, "n_modes": 10},
    },
    "exp-weakform": {
        "harness": {"kind": "weakform", "name": "exp-weakform", "ensemble_size": 1, "master_seed": 42},
        "path": {"kind": "linear", "n_steps": 256, "horizon": 0.25},
        "solver": {"flux_coeffs": [0.0, 0.0, 0.5], "nx": 2048, "u0": "riemann", "ul": 1.0, "ur": -1.0, "x0": 0.5},
    },
}


def preset(name: str) -> ExperimentConfig:
    """A fully populated configuration for one of the named experiments"""
    if name not in PRESETS:
        raise ValueError(f"unknown preset '{name}' (expected one of {sorted(PRESETS)})")
    return config_from_dict(PRESETS[name])
