"""Monotone finite-volume solver for rough-flux conservation laws on the torus"""
from .flux import Flux, make_flux, check_nondegeneracy, pairwise_nondegeneracy
from .models import GridSolution, KineticMeasure, TORUS_LENGTH
from .schemes import monotone_substep, rough_substeps, substep_count, total_variation
from .rough_solver import SCHEMES, audit_solution, snap_output_times, solve_rough
from .entropy import default_levels, entropy_defect
from .initial_data import build_initial_data, constant, lacunary, riemann, sine
from .solution_io import (
    read_solution_binary,
    write_measure_csv,
    write_solution_binary,
    write_solution_csv,
)

__all__ = [
    'Flux',
    'make_flux',
    'check_nondegeneracy',
    'pairwise_nondegeneracy',
    'GridSolution',
    'KineticMeasure',
    'TORUS_LENGTH',
    'monotone_substep',
    'rough_substeps',
    'substep_count',
    'total_variation',
    'SCHEMES',
    'audit_solution',
    'snap_output_times',
    'solve_rough',
    'default_levels',
    'entropy_defect',
    'build_initial_data',
    'constant',
    'lacunary',
    'riemann',
    'sine',
    'read_solution_binary',
    'write_measure_csv',
    'write_solution_binary',
    'write_solution_csv',
]
