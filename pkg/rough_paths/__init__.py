"""Driving paths: generation, sums and Hölder regularity"""
from .sampled_path import SampledPath, HoelderEstimate, PathKind
from .generators import (
    derive_seed,
    fgn_autocovariance,
    generate_brownian,
    generate_deterministic,
    generate_fbm,
    generate_weierstrass,
    scale_path,
    shift_path,
    sum_paths,
)
from .holder import holder_exponent, holder_seminorm
from .path_io import read_path, write_path

__all__ = [
    'SampledPath',
    'HoelderEstimate',
    'PathKind',
    'derive_seed',
    'fgn_autocovariance',
    'generate_brownian',
    'generate_deterministic',
    'generate_fbm',
    'generate_weierstrass',
    'scale_path',
    'shift_path',
    'sum_paths',
    'holder_exponent',
    'holder_seminorm',
    'read_path',
    'write_path',
]
