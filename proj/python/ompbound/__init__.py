"""Greedy sparse support recovery with isometry certificates and error-rate
bounds.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ompbound._core import (
    CapacityError,
    Coefficients,
    DegeneracyError,
    DomainError,
    ErrorRateBound,
    IterationRecord,
    MissedSetStats,
    OmpOutput,
    RicResult,
    SignalStats,
    SufficientRegion,
    SweepResult,
    SweepSummary,
    TrialRecord,
    ValidationError,
    binary_entropy,
    coefficients,
    compare_error_constants,
    derive_stream_seed,
    error_rate,
    error_rate_bound,
    feasibility_rho_max,
    gen_matrix,
    gen_signal,
    inject_noise,
    joint_entropy,
    min_sampling_rate,
    missed_set_stats,
    necessary_snr,
    omp_run,
    required_snr,
    residual_decrease_diagnostic,
    rho0_unity_crossing,
    ric_exact,
    ric_sampled_lower_bound,
    run_sweep,
    select_index,
    signal_stats,
    snr_delta_curve,
    sufficient_region,
    support_of,
)

__all__ = [
    "CapacityError",
    "Coefficients",
    "DegeneracyError",
    "DomainError",
    "ErrorRateBound",
    "IterationRecord",
    "MissedSetStats",
    "OmpOutput",
    "RicResult",
    "SignalStats",
    "SufficientRegion",
    "SweepResult",
    "SweepSummary",
    "TrialRecord",
    "ValidationError",
    "binary_entropy",
    "coefficients",
    "compare_error_constants",
    "derive_stream_seed",
    "error_rate",
    "error_rate_bound",
    "feasibility_rho_max",
    "gen_matrix",
    "gen_signal",
    "inject_noise",
    "joint_entropy",
    "min_sampling_rate",
    "missed_set_stats",
    "necessary_snr",
    "omp_run",
    "required_snr",
    "residual_decrease_diagnostic",
    "rho0_unity_crossing",
    "ric_exact",
    "ric_sampled_lower_bound",
    "run_sweep",
    "select_index",
    "signal_stats",
    "snr_delta_curve",
    "sufficient_region",
    "support_of",
]

__version__ = "0.1.0"
