"""Saturation throughput analysis of sensing-based synchronized MAC protocols.

Closed-form throughput models for single- and multi-channel cognitive MAC
with slotted CSMA/CA contention, a joint sensing-time / contention-window
optimizer, and a seeded Monte Carlo simulator serving as an independent
cross-check of the analysis.
"""

from .contention import (
    BASIC,
    BIANCHI_R3_DEFAULTS,
    BackoffParams,
    FixedPoint,
    MacTiming,
    RTS_CTS,
    TIMING_PROFILES,
    conditional_throughput,
    mean_slot_duration,
    phi_of_p,
    slot_durations,
    solve_fixed_point,
    transmission_probabilities,
)
from .errors import (
    CogmacError,
    ConfigError,
    HeterogeneousModelError,
    InfeasibleError,
    SolverError,
)
from .optimizer import (
    OptimizationResult,
    StationaryDiagnostic,
    TauOptimum,
    contention_scale_positivity,
    optimize_joint,
    optimize_tau,
    stationary_diagnostic,
)
from .qfunc import q_function, q_inverse
from .scenario import ScenarioSpec, generate
from .sensing import (
    LinkSensing,
    SensingParams,
    detection_probability,
    false_alarm_at_target_pd,
    false_alarm_probability,
    participation_probabilities,
    snr_db_to_linear,
    solve_threshold,
)
from .simulator import SimConfig, SimReport, replicate, run_simulation
from .throughput import (
    MULTI,
    NetworkConfig,
    SINGLE,
    ThroughputReport,
    multi_channel_nt,
    multi_channel_pr_n,
    multi_channel_stats,
    normalized_throughput,
    poisson_binomial,
    single_channel_nt,
    single_channel_pr_n,
)

__version__ = "0.1.0"

__all__ = [
    "BASIC",
    "BIANCHI_R3_DEFAULTS",
    "BackoffParams",
    "CogmacError",
    "ConfigError",
    "FixedPoint",
    "HeterogeneousModelError",
    "InfeasibleError",
    "LinkSensing",
    "MULTI",
    "MacTiming",
    "NetworkConfig",
    "OptimizationResult",
    "RTS_CTS",
    "SINGLE",
    "ScenarioSpec",
    "SensingParams",
    "SimConfig",
    "SimReport",
    "SolverError",
    "StationaryDiagnostic",
    "TIMING_PROFILES",
    "TauOptimum",
    "ThroughputReport",
    "conditional_throughput",
    "contention_scale_positivity",
    "detection_probability",
    "false_alarm_at_target_pd",
    "false_alarm_probability",
    "generate",
    "mean_slot_duration",
    "multi_channel_nt",
    "multi_channel_pr_n",
    "multi_channel_stats",
    "normalized_throughput",
    "optimize_joint",
    "optimize_tau",
    "participation_probabilities",
    "phi_of_p",
    "poisson_binomial",
    "q_function",
    "q_inverse",
    "replicate",
    "run_simulation",
    "single_channel_nt",
    "single_channel_pr_n",
    "slot_durations",
    "snr_db_to_linear",
    "solve_fixed_point",
    "solve_threshold",
    "stationary_diagnostic",
    "transmission_probabilities",
]
