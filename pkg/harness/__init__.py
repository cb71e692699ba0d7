"""Configuration-driven experiment runner and CLI"""
from utils.errors import ConfigError, NumericalInvariantError

from .config import (
    ENV_DOC,
    EXPERIMENT_KINDS,
    ExperimentConfig,
    HarnessSpec,
    IotaSpec,
    IrregularitySpec,
    KineticSpec,
    PathSpec,
    RegularitySpec,
    SolverSpec,
    config_from_dict,
    config_schema,
    load_config,
    to_ini,
    worker_count,
)
from .presets import PRESETS, preset
from .run_manifest import InventoryEntry, ManifestStore, RunManifest, read_manifest
from .experiments import EXPERIMENTS, build_path, generate_ensemble, path_groups
from .runner import ExperimentRunner, run

__all__ = [
    'ConfigError',
    'NumericalInvariantError',
    'ENV_DOC',
    'EXPERIMENT_KINDS',
    'ExperimentConfig',
    'HarnessSpec',
    'IotaSpec',
    'IrregularitySpec',
    'KineticSpec',
    'PathSpec',
    'RegularitySpec',
    'SolverSpec',
    'config_from_dict',
    'config_schema',
    'load_config',
    'to_ini',
    'worker_count',
    'PRESETS',
    'preset',
    'InventoryEntry',
    'ManifestStore',
    'RunManifest',
    'read_manifest',
    'EXPERIMENTS',
    'build_path',
    'generate_ensemble',
    'path_groups',
    'ExperimentRunner',
    'run',
]
