"""
Experiment configuration: pydantic section models, INI loading and environment settings
"""
import configparser
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union, get_args, get_origin

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from regularity import default_levels
from regularity.exponents import FIT_HI_DEFAULT, FIT_LO_CELLS, MIN_FIT_LAGS
from solver import SCHEMES
from utils.errors import ConfigError

load_dotenv(override=True)

ExperimentKind = Literal[
    "paths", "irregularity", "iota", "solve", "regularity-sweep", "exponents", "weakform"
]
EXPERIMENT_KINDS = get_args(ExperimentKind)

ENV_DOC = """Environment variables (read from the process environment or a .env file):
  ROUGHREG_WORKERS     realization-level worker processes (default: logical cores; 1 = serial)
  ROUGHREG_OUTPUT_DIR  default output root for runs without --out (default: ./outputs)
  ROUGHREG_RUNS_DIR    directory the HTTP server lists runs from (default: ROUGHREG_OUTPUT_DIR)
"""


class PathSpec(BaseModel):
    """Driving path: base kind plus optional drift and Weierstrass perturbation"""

    kind: Literal["fbm", "brownian", "linear", "weierstrass"] = Field(
        default="fbm", description="Base path"
    )
    hurst: float = Field(default=0.5, gt=0.0, lt=1.0, description="Hurst index for fbm")
    hursts: List[float] = Field(
        default_factory=list, description="H sweep; one ensemble per value, overrides hurst"
    )
    dim: int = Field(default=1, ge=1, description="Path dimension (solver runs need 1)")
    n_steps: int = Field(default=1024, ge=8, description="Grid steps N")
    horizon: float = Field(default=1.0, gt=0.0, description="Horizon T")
    drift: float = Field(default=0.0, description="Added linear drift: w = drift·t + base")
    weierstrass_alpha: float = Field(default=0.5, gt=0.0, lt=1.0, description="Hölder index of g")
    weierstrass_amplitude: float = Field(default=0.0, description="Added amplitude·g; 0 disables")

    @field_validator("hursts")
    @classmethod
    def _hursts_in_range(cls, v):
        for h in v:
            if not 0.0 < h < 1.0:
                raise ValueError(f"every H must lie in (0, 1), got {h}")
        return [float(h) for h in v]


class SolverSpec(BaseModel):
    """Flux, grid, scheme and initial data"""

    flux_coeffs: List[float] = Field(
        default_factory=lambda: [0.0, 0.0, 0.5], description="Ascending coefficients of A"
    )
    nx: int = Field(default=1024, ge=16, description="Cells on the unit torus")
    cfl: float = Field(default=0.9, gt=0.0, le=1.0)
    scheme: str = Field(default="engquist_osher", description=f"One of {SCHEMES}")
    u0: Literal["riemann", "sine", "lacunary", "constant"] = "lacunary"
    ul: float = 1.0
    ur: float = 0.0
    x0: float = 0.25
    amp: float = 0.1
    freq: int = Field(default=1, ge=1)
    lambda0: float = Field(default=0.3, gt=0.0, lt=1.0)
    n_modes: int = Field(default=10, ge=1)
    value: float = 0.0
    output_times: List[float] = Field(
        default_factory=list, description="Output times; empty means n_outputs equispaced times"
    )
    n_outputs: int = Field(default=9, ge=2, description="Equispaced output times including 0 and T")

    @field_validator("scheme")
    @classmethod
    def _known_scheme(cls, v):
        if v not in SCHEMES:
            raise ValueError(f"unknown scheme '{v}', expected one of {SCHEMES}")
        return v

    def initial_params(self) -> Dict[str, Any]:
        return {
            "riemann": {"ul": self.ul, "ur": self.ur, "x0": self.x0},
            "sine": {"amp": self.amp, "freq": self.freq},
            "lacunary": {"lambda0": self.lambda0, "n_modes": self.n_modes},
            "constant": {"value": self.value},
        }[self.u0]


class IrregularitySpec(BaseModel):
    a_max: float = Field(default=256.0, ge=4.0, description="Largest frequency magnitude")
    n_a: int = Field(default=32, ge=8)
    gamma: float = Field(default=0.55, gt=0.0, le=1.0)
    gammas: List[float] = Field(default_factory=list, description="Optional γ sweep")
    kappas: List[float] = Field(
        default_factory=lambda: [0.25, 0.5, 0.75], description="Interpolation checks"
    )
    max_levels: int = Field(default=10, ge=1)

    @field_validator("gammas", "kappas")
    @classmethod
    def _unit_interval(cls, v):
        for x in v:
            if not 0.0 < x <= 1.0:
                raise ValueError(f"values must lie in (0, 1], got {x}")
        return [float(x) for x in v]


class IotaSpec(BaseModel):
    alphas: List[float] = Field(default_factory=lambda: [-0.3, -0.5, -0.7])
    lambda_min: float = Field(default=4.0, ge=1.0)
    lambda_max: float = Field(default=4096.0, gt=0.0)
    n_lambda: int = Field(default=16, ge=4)
    compare_rho: bool = Field(default=False, description="Also record 1/(2ρ̂) next to ι̂")

    @field_validator("alphas")
    @classmethod
    def _alpha_range(cls, v):
        if not v:
            raise ValueError("need at least one alpha")
        for a in v:
            if not -0.9 < a < -0.1:
                raise ValueError(f"alpha must lie in (-0.9, -0.1), got {a}")
        return [float(a) for a in v]


class RegularitySpec(BaseModel):
    n_levels: Optional[int] = Field(default=None, ge=4, description="Dyadic lags (default log2 nx)")
    fit_lo: Optional[float] = Field(default=None, gt=0.0, description="Default 4Δx")
    fit_hi: Optional[float] = Field(default=None, gt=0.0, le=0.5, description="Default 1/16")
    lambdas: List[float] = Field(
        default_factory=lambda: [0.25, 0.5, 0.75], description="Gagliardo seminorm exponents"
    )
    nu: float = Field(default=1.0, ge=1.0, description="Degeneracy order for predictions")
    table_hursts: List[float] = Field(
        default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
        description="H values of the exponents table",
    )

    @field_validator("lambdas")
    @classmethod
    def _lambda_range(cls, v):
        for lam in v:
            if not 0.05 < lam < 0.95:
                raise ValueError(f"lambda must lie in (0.05, 0.95), got {lam}")
        return [float(x) for x in v]

    @field_validator("table_hursts")
    @classmethod
    def _table_range(cls, v):
        for h in v:
            if not 0.0 < h < 1.0:
                raise ValueError(f"every H must lie in (0, 1), got {h}")
        return [float(h) for h in v]


class KineticSpec(BaseModel):
    n_levels: int = Field(default=64, ge=2, description="Kruzhkov levels")
    max_blocks: int = Field(default=32, ge=1)
    t_eval: Optional[float] = Field(default=None, description="Weak-form time (default T)")
    check_entropy: bool = Field(default=True, description="Replay solves for the entropy defect")


class HarnessSpec(BaseModel):
    kind: ExperimentKind = "paths"
    name: str = Field(default="", description="Run name; default is the experiment kind")
    ensemble_size: int = Field(default=1, ge=1)
    master_seed: int = Field(default=0, ge=0)
    output_dir: Optional[str] = Field(default=None, description="Default ROUGHREG_OUTPUT_DIR/name")
    plots: bool = True
    paired_deterministic: bool = Field(
        default=False, description="Add a linear-path group with the same data"
    )


class ExperimentConfig(BaseModel):
    harness: HarnessSpec = Field(default_factory=HarnessSpec)
    path: PathSpec = Field(default_factory=PathSpec)
    solver: SolverSpec = Field(default_factory=SolverSpec)
    irregularity: IrregularitySpec = Field(default_factory=IrregularitySpec)
    iota: IotaSpec = Field(default_factory=IotaSpec)
    regularity: RegularitySpec = Field(default_factory=RegularitySpec)
    kinetic: KineticSpec = Field(default_factory=KineticSpec)

    @property
    def run_name(self) -> str:
        return self.harness.name or self.harness.kind


SECTIONS = tuple(ExperimentConfig.model_fields)
SOLVER_KINDS = ("solve", "regularity-sweep", "weakform")


def check_ranges(config: ExperimentConfig) -> ExperimentConfig:
    """Cross-field checks that a single section model cannot see"""
    path, solver = config.path, config.solver
    kind = config.harness.kind
    if config.iota.lambda_max / config.iota.lambda_min < 16.0:
        raise ConfigError("iota.lambda_max", "must be at least 16·lambda_min")
    lo, hi = config.regularity.fit_lo, config.regularity.fit_hi
    if lo is not None and hi is not None and not lo < hi:
        raise ConfigError("regularity.fit_lo", f"must be below fit_hi={hi}")
    if kind in SOLVER_KINDS:
        if path.dim != 1:
            raise ConfigError("path.dim", "solver runs need a one-dimensional path")
        trimmed = list(solver.flux_coeffs)
        while len(trimmed) > 1 and trimmed[-1] == 0:
            trimmed.pop()
        if len(trimmed) < 2:
            raise ConfigError("solver.flux_coeffs", "flux must have degree at least 1")
        if config.regularity.n_levels is not None and 2**config.regularity.n_levels > solver.nx:
            raise ConfigError("regularity.n_levels", f"2^n_levels exceeds nx={solver.nx}")
        for t in solver.output_times:
            if not 0.0 <= t <= path.horizon:
                raise ConfigError("solver.output_times", f"time {t} outside [0, {path.horizon}]")
        t_eval = config.kinetic.t_eval
        if t_eval is not None and not 0.0 < t_eval <= path.horizon:
            raise ConfigError("kinetic.t_eval", f"must lie in (0, {path.horizon}]")
        if solver.u0 == "riemann" and not 0.0 <= solver.x0 < 1.0:
            raise ConfigError("solver.x0", "must lie in [0, 1)")
    if kind == "regularity-sweep":
        _check_fit_lags(config)
    return config


def _check_fit_lags(config: ExperimentConfig) -> None:
    nx = config.solver.nx
    spec = config.regularity
    n_levels = spec.n_levels if spec.n_levels is not None else default_levels(nx)
    lo = spec.fit_lo if spec.fit_lo is not None else FIT_LO_CELLS / nx
    hi = spec.fit_hi if spec.fit_hi is not None else FIT_HI_DEFAULT
    lags = [2**k / nx for k in range(n_levels)]
    inside = sum(lo * (1 - 1e-12) <= h <= hi * (1 + 1e-12) for h in lags)
    if inside < MIN_FIT_LAGS:
        raise ConfigError(
            "regularity.fit_lo",
            f"fit range [{lo:g}, {hi:g}] holds {inside} dyadic lags at nx={nx}, need {MIN_FIT_LAGS}",
        )


def config_from_dict(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a nested dict; every failure becomes a ConfigError naming the field"""
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigError(unknown[0], f"unknown section (expected one of {list(SECTIONS)})")
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(part) for part in err["loc"]) or "config"
        raise ConfigError(field, err["msg"]) from e
    return check_ranges(config)


def _is_list_field(annotation) -> bool:
    return get_origin(annotation) in (list, List)


def _is_optional(annotation) -> bool:
    return get_origin(annotation) is Union and type(None) in get_args(annotation)


def _parse_section(name: str, items: Dict[str, str]) -> Dict[str, Any]:
    model = ExperimentConfig.model_fields[name].annotation
    out: Dict[str, Any] = {}
    for key, raw in items.items():
        if key not in model.model_fields:
            raise ConfigError(f"{name}.{key}", "unknown key")
        annotation = model.model_fields[key].annotation
        raw = raw.strip()
        if _is_list_field(annotation):
            out[key] = [part.strip() for part in raw.split(",") if part.strip()]
        elif _is_optional(annotation) and raw.lower() in ("", "none"):
            out[key] = None
        else:
            out[key] = raw
    return out


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read an INI file with one section per module; list values are comma separated"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config", f"file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as e:
        raise ConfigError("config", f"unreadable INI: {e}") from e
    data = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(section, f"unknown section (expected one of {list(SECTIONS)})")
        data[section] = _parse_section(section, dict(parser.items(section)))
    return config_from_dict(data)


def _format_value(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(format(v, "g") if isinstance(v, float) else str(v) for v in value)
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def to_ini(config: ExperimentConfig) -> str:
    """Render a config in the format load_config reads"""
    lines = []
    for section in SECTIONS:
        lines.append(f"[{section}]")
        for key, value in getattr(config, section).model_dump().items():
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)


def config_schema() -> Dict[str, Any]:
    return ExperimentConfig.model_json_schema()


def worker_count() -> int:
    raw = os.getenv("ROUGHREG_WORKERS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError("ROUGHREG_WORKERS", f"must be a positive integer, got '{raw}'") from None
    if workers < 1:
        raise ConfigError("ROUGHREG_WORKERS", f"must be a positive integer, got {workers}")
    return workers


def default_output_root() -> Path:
    return Path(os.getenv("ROUGHREG_OUTPUT_DIR", "./outputs"))


def runs_root() -> Path:
    return Path(os.getenv("ROUGHREG_RUNS_DIR") or default_output_root())


def output_dir_for(config: ExperimentConfig) -> Path:
    if config.harness.output_dir:
        return Path(config.harness.output_dir)
    return default_output_root() / config.run_name
