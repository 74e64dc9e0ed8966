"""
dcesim: microwave radiation from a modulated superconducting waveguide
termination.

A sinusoidally driven SQUID at the end of a transmission line acts as a
mirror with an oscillating effective position.  Driven fast enough, the
boundary converts vacuum (and thermal) fluctuations into correlated photon
pairs at frequencies placed symmetrically around half the drive frequency.
This package computes the full sideband scattering of that boundary,
propagates thermal inputs to output second moments and covariance
matrices, evaluates nonclassicality witnesses, two-mode squeezing and
logarithmic negativity, and estimates the same indicators from measured
quadrature records with bootstrap uncertainties.
"""

from ._version import __version__
from .model import (
    HBAR,
    KB,
    CircuitConfig,
    ModePair,
    config_from_dict,
    config_to_dict,
    default_config,
    load_config,
    mode_pair,
    modulation_parameter,
    thermal_occupation,
)
from .scattering import (
    ConvergenceError,
    LadderIndexSet,
    ScatteringRow,
    commutator_defect,
    dump_ladder_system,
    first_order_row,
    perturbative_amplitudes,
    solve_scattering,
)
from .moments import (
    CovarianceMatrix,
    MomentSet,
    covariance_matrix,
    moments_from_covariance,
    output_moments,
    pair_statistics,
    symplectic_eigenvalues,
)
from .indicators import (
    IndicatorReport,
    InvalidCovarianceError,
    fdf_min,
    fdf_theta,
    indicators_from_moments,
    logarithmic_negativity,
    onset_estimates,
    sigma2_threshold,
    two_mode_squeezing,
)
from .estimator import (
    CHANNELS,
    DegenerateDataError,
    EstimateReport,
    ParseError,
    QuadratureRecordSet,
    bootstrap_indicators,
    estimate_covariance,
    indicator_standard_errors,
    inject_detector_noise,
    load_quadrature_records,
    sample_quadratures,
    write_quadrature_records,
)
from .sweep import (
    FIGURE_IDS,
    SWEEP_COLUMNS,
    SweepPointError,
    SweepSpec,
    emit,
    evaluate_point,
    reproduce_figure,
    run_sweep,
    standard_metadata,
)

__all__ = [
    "__version__",
    "HBAR",
    "KB",
    "CircuitConfig",
    "ModePair",
    "config_from_dict",
    "config_to_dict",
    "default_config",
    "load_config",
    "mode_pair",
    "modulation_parameter",
    "thermal_occupation",
    "ConvergenceError",
    "LadderIndexSet",
    "ScatteringRow",
    "commutator_defect",
    "dump_ladder_system",
    "first_order_row",
    "perturbative_amplitudes",
    "solve_scattering",
    "CovarianceMatrix",
    "MomentSet",
    "covariance_matrix",
    "moments_from_covariance",
    "output_moments",
    "pair_statistics",
    "symplectic_eigenvalues",
    "IndicatorReport",
    "InvalidCovarianceError",
    "fdf_min",
    "fdf_theta",
    "indicators_from_moments",
    "logarithmic_negativity",
    "onset_estimates",
    "sigma2_threshold",
    "two_mode_squeezing",
    "CHANNELS",
    "DegenerateDataError",
    "EstimateReport",
    "ParseError",
    "QuadratureRecordSet",
    "bootstrap_indicators",
    "estimate_covariance",
    "indicator_standard_errors",
    "inject_detector_noise",
    "load_quadrature_records",
    "sample_quadratures",
    "write_quadrature_records",
    "FIGURE_IDS",
    "SWEEP_COLUMNS",
    "SweepPointError",
    "SweepSpec",
    "emit",
    "evaluate_point",
    "reproduce_figure",
    "run_sweep",
    "standard_metadata",
]
