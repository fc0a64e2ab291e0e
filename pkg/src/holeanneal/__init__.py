"""Adiabatic annealing search of a single hole on a flat potential landscape.

The library models an n-site system with all-to-all hopping and one
attractive site, anneals it along linear schedules, and answers the
questions that matter for the search: the closed-form spectrum, the exact
two-dimensional reduced dynamics (usable up to a million sites), an
independent full-space integrator for cross-checks, the minimum annealing
time for a target success probability, and the adiabatic bookkeeping that
explains it.
"""

from .analysis import (
    GapScalingReport,
    GapVariant,
    critical_point,
    crossover_width,
    gap_scaling,
    initial_ground_overlap,
    localization_profile,
    min_gap,
    uniform_ground_overlap,
)
from .annealing import (
    AdiabaticFactor,
    BisectionConfig,
    BisectionResult,
    adiabatic_ceiling,
    adiabatic_factor_closed_form,
    adiabatic_factor_numeric,
    bisect_tau_min,
    peak_location,
    success_probability,
    tau_min,
)
from .dynamics import (
    FULL_SIZE_LIMIT,
    FullState,
    ReducedState,
    RunRecord,
    convergence_check,
    default_n_steps,
    dense_hamiltonian,
    evolve_full,
    evolve_reduced,
    full_state_trajectory,
    initial_state_uniform,
    step_propagator,
    uniform_full_state,
)
from .errors import (
    BracketFailureError,
    HoleAnnealError,
    InvalidParameterError,
    NoCrossingError,
    OutOfRangeError,
    RegimeError,
    SingularParameterError,
    SizeExceededError,
    UnreachableTargetError,
)
from .model import (
    ModelParams,
    Schedule,
    ScheduleKind,
    SpectralPoint,
    coefficients,
    degenerate_eigenvalue,
    eigenvalues,
    gap,
    ground_hole_amplitude,
    reduced_hamiltonian,
    schedule_derivatives,
    schedule_eval,
    spectral_point,
)

__version__ = "0.1.0"

__all__ = [
    "AdiabaticFactor",
    "BisectionConfig",
    "BisectionResult",
    "BracketFailureError",
    "FULL_SIZE_LIMIT",
    "FullState",
    "GapScalingReport",
    "GapVariant",
    "HoleAnnealError",
    "InvalidParameterError",
    "ModelParams",
    "NoCrossingError",
    "OutOfRangeError",
    "ReducedState",
    "RegimeError",
    "RunRecord",
    "Schedule",
    "ScheduleKind",
    "SingularParameterError",
    "SizeExceededError",
    "SpectralPoint",
    "UnreachableTargetError",
    "adiabatic_ceiling",
    "adiabatic_factor_closed_form",
    "adiabatic_factor_numeric",
    "bisect_tau_min",
    "coefficients",
    "convergence_check",
    "critical_point",
    "crossover_width",
    "default_n_steps",
    "degenerate_eigenvalue",
    "dense_hamiltonian",
    "eigenvalues",
    "evolve_full",
    "evolve_reduced",
    "full_state_trajectory",
    "gap",
    "gap_scaling",
    "ground_hole_amplitude",
    "initial_ground_overlap",
    "initial_state_uniform",
    "localization_profile",
    "min_gap",
    "peak_location",
    "reduced_hamiltonian",
    "schedule_derivatives",
    "schedule_eval",
    "spectral_point",
    "step_propagator",
    "success_probability",
    "tau_min",
    "uniform_ground_overlap",
    "uniform_full_state",
    "__version__",
]
