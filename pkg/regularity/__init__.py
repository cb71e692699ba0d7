"""Fractional regularity of spatial fields and the predicted exponent formulas"""
from irregularity import predicted_iota_from_rho

from .models import BoundTerms, InterplayResult, ModulusCurve, RegularityReport
from .modulus import default_levels, l1_modulus, shift_l1, time_averaged_modulus
from .exponents import besov_exponent, gagliardo_seminorm, seminorm_from_modulus, with_gagliardo
from .predicted import (
    exponents_table,
    interplay_pairs,
    predicted_lambda_fbm,
    predicted_lambda_main,
    predicted_s_star,
    theorem_bound_terms,
)

__all__ = [
    'BoundTerms',
    'InterplayResult',
    'ModulusCurve',
    'RegularityReport',
    'default_levels',
    'l1_modulus',
    'shift_l1',
    'time_averaged_modulus',
    'besov_exponent',
    'gagliardo_seminorm',
    'seminorm_from_modulus',
    'with_gagliardo',
    'exponents_table',
    'interplay_pairs',
    'predicted_lambda_fbm',
    'predicted_lambda_main',
    'predicted_s_star',
    'theorem_bound_terms',
    'predicted_iota_from_rho',
]
