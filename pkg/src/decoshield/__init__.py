"""Weak-measurement protection of qubit states and two-qubit entanglement
passing through finite-temperature amplitude-damping channels."""

from .channels import (
    GadParams,
    KrausChannel,
    apply_channel,
    apply_on_qubit,
    apply_via_dilation,
    check_trace_preserving,
    gad_channel,
)
from .entangle import (
    ConcurrenceReport,
    EntangledInput,
    XStateCoefficients,
    channel_degraded_state,
    component_coefficients,
    concurrence_lambda1,
    concurrence_lambda2,
    lambda2_max,
    measured_coefficients,
    optimal_parameters,
    optimal_reversal,
    pipeline_state,
    population_transfer,
    protected_state,
    reversed_state,
)
from .linalg import (
    PureQubit,
    equatorial_state,
    fidelity,
    ket_density,
    to_density,
    validate_density,
    wootters_concurrence,
)
from .optimize import (
    SearchBox,
    SearchResult,
    grid_maximize,
    simplex_maximize,
    stationarity_check,
)
from .qubit import (
    AverageFidelityReport,
    OptimalStrengths,
    ProtectionResult,
    apply_protection,
    average_fidelity_six,
    baseline_fidelity,
    bb84_error_rate,
    g_value,
    optimal_average,
    optimal_strengths,
    protect_equatorial,
)
from .weakmeas import (
    PostSelectionError,
    WeakMeasurement,
    apply_postselected,
    physical_form,
)

__all__ = [
    "AverageFidelityReport",
    "ConcurrenceReport",
    "EntangledInput",
    "GadParams",
    "KrausChannel",
    "OptimalStrengths",
    "PostSelectionError",
    "ProtectionResult",
    "PureQubit",
    "SearchBox",
    "SearchResult",
    "WeakMeasurement",
    "XStateCoefficients",
    "apply_channel",
    "apply_on_qubit",
    "apply_postselected",
    "apply_protection",
    "apply_via_dilation",
    "average_fidelity_six",
    "baseline_fidelity",
    "bb84_error_rate",
    "channel_degraded_state",
    "check_trace_preserving",
    "component_coefficients",
    "concurrence_lambda1",
    "concurrence_lambda2",
    "equatorial_state",
    "fidelity",
    "g_value",
    "gad_channel",
    "grid_maximize",
    "ket_density",
    "lambda2_max",
    "measured_coefficients",
    "optimal_average",
    "optimal_parameters",
    "optimal_reversal",
    "optimal_strengths",
    "physical_form",
    "pipeline_state",
    "population_transfer",
    "protect_equatorial",
    "protected_state",
    "reversed_state",
    "simplex_maximize",
    "stationarity_check",
    "to_density",
    "validate_density",
    "wootters_concurrence",
]

__version__ = "0.1.0"
