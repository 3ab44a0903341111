"""On-off duplex signaling: rate analysis, neighbor discovery and message coding."""

from ._rodd import (
    ConvergenceError,
    EmptyNetworkError,
    LengthMismatchError,
    MetricsUndefinedError,
    ParameterError,
    RateResult,
    RoddError,
    SizeError,
    SolverError,
    asymmetric_rate_bounds,
    awgn_rate,
    binary_entropy,
    derive_mask,
    gauss_aloha_throughput,
    gauss_symmetric_capacity,
    gauss_symmetric_rate,
    or_aloha_throughput,
    or_rate_at_p,
    or_symmetric_capacity,
    or_symmetric_rate,
    run_discovery,
    run_sparsecode,
    run_validation,
    sweep_gauss,
    sweep_or,
)

__version__ = "0.1.0"
