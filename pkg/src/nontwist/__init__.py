"""Cubic nontwist map dynamics.

A library and CLI for the cubic nontwist area-preserving map, its
interpolating Hamiltonian, the reconnection thresholds of its three chains,
and phase-portrait datasets.  Hot loops run on a compiled kernel when the
extension is built, with a pure-Python fallback selected at import time
(``kernel_backend()`` reports which one is active).
"""
from ._backend import kernel_backend
from .errors import (
    ConfigError,
    DomainError,
    DriftBudgetError,
    NontwistError,
    NumericalError,
)
from .hamiltonian import (
    Equilibrium,
    SYMMETRY_LINES,
    chain_saddle,
    energy,
    equilibria,
    jacobian,
    reversal,
    vector_field,
)
from .maps import (
    LiftPoint,
    Params,
    PhasePoint,
    TwistlessCircles,
    extremal_rotation_numbers,
    lift_orbit,
    lift_step,
    orbit,
    rotation_number_numeric,
    rotation_profile,
    step,
    twist_derivative,
    twistless_circles,
    wrap_angle,
)
from .portrait import (
    PortraitResult,
    PortraitSettings,
    SeparatrixBranch,
    SeparatrixBundle,
    TopologyResult,
    Trace,
    Window,
    chain_topology,
    default_window,
    integrate,
    is_meander,
    level_curves,
    portrait,
    separatrices,
)
from .reconnection import (
    RegimeLabel,
    ThresholdReport,
    ThresholdRoot,
    k_of_b_II_III,
    regime,
    residual_I_II,
    residual_II_III,
    solve_threshold,
    triple_point,
    triple_residual,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DomainError", "DriftBudgetError", "NontwistError",
    "NumericalError", "Equilibrium", "SYMMETRY_LINES", "chain_saddle",
    "energy", "equilibria", "jacobian", "reversal", "vector_field",
    "LiftPoint", "Params", "PhasePoint", "TwistlessCircles",
    "extremal_rotation_numbers", "lift_orbit", "lift_step", "orbit",
    "rotation_number_numeric", "rotation_profile", "step",
    "twist_derivative", "twistless_circles", "wrap_angle",
    "PortraitResult", "PortraitSettings", "SeparatrixBranch",
    "SeparatrixBundle", "TopologyResult", "Trace", "Window",
    "chain_topology", "default_window", "integrate", "is_meander",
    "level_curves", "portrait", "separatrices",
    "RegimeLabel", "ThresholdReport", "ThresholdRoot", "k_of_b_II_III",
    "regime", "residual_I_II", "residual_II_III", "solve_threshold",
    "triple_point", "triple_residual",
    "kernel_backend", "__version__",
]
