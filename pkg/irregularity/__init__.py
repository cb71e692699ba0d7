"""Oscillatory integrals, (ρ, γ)-irregularity and the scaling index ι"""
from .models import (
    AveragingCheck,
    InterpolationCheck,
    IotaEstimate,
    IrregularityReport,
    OscillatoryScan,
)
from .oscillatory import (
    dyadic_windows,
    finite_grid_norm,
    fit_k_constant,
    k_sup,
    k_sup_bound,
    oscillatory_scan,
    phi,
    psi,
)
from .rho_gamma import (
    DEFAULT_GAMMA,
    check_interpolation,
    estimate_rho_gamma,
    gamma_sweep,
    predicted_iota_from_rho,
)
from .scaling_index import estimate_iota, scaling_integrals
from .averaging import check_averaging_bound
from .report_io import (
    iota_summary,
    irregularity_summary,
    write_iota_csv,
    write_irregularity_report,
    write_scan_csv,
    write_sup_profile_csv,
)

__all__ = [
    'AveragingCheck',
    'InterpolationCheck',
    'IotaEstimate',
    'IrregularityReport',
    'OscillatoryScan',
    'dyadic_windows',
    'finite_grid_norm',
    'fit_k_constant',
    'k_sup',
    'k_sup_bound',
    'oscillatory_scan',
    'phi',
    'psi',
    'DEFAULT_GAMMA',
    'check_interpolation',
    'estimate_rho_gamma',
    'gamma_sweep',
    'predicted_iota_from_rho',
    'estimate_iota',
    'scaling_integrals',
    'check_averaging_bound',
    'iota_summary',
    'irregularity_summary',
    'write_iota_csv',
    'write_irregularity_report',
    'write_scan_csv',
    'write_sup_profile_csv',
]
