"""Kinetic function, velocity averages and the transported weak-form checker"""
from .chi import KineticField, chi, chi_field, chi_values, piecewise_linear_antiderivative, velocity_average
from .weak_form import (
    TestFunction,
    WeakFormReport,
    default_catalog,
    weak_form_residual,
    write_weak_form_csv,
)

__all__ = [
    'KineticField',
    'chi',
    'chi_field',
    'chi_values',
    'piecewise_linear_antiderivative',
    'velocity_average',
    'TestFunction',
    'WeakFormReport',
    'default_catalog',
    'weak_form_residual',
    'write_weak_form_csv',
]
