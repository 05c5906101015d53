"""Entanglement witnesses from multi-mode squeezing.

Gaussian states are handled through covariance matrices (``phase_space``,
``gaussian_states``, ``witness``); non-Gaussian states through a truncated
Fock-space simulator (``fock``).
"""

from .gaussian_states import (
    BeamSplitter,
    Circuit,
    Squeezer,
    TwoModeSqueezer,
    compile_symplectic,
    evolve_covariance,
    named_state,
    tms2_circuit,
    tms3_circuit,
    vacuum_covariance,
)
from .optimizer import OptimizationResult, OptimizerConfig, RayleighProductProblem, minimize
from .phase_space import (
    CovarianceError,
    Partition,
    PartitionError,
    build_symplectic_form,
    remove_correlations,
    validate_covariance,
)
from .witness import BoundCheck, SqueezingVerdict, xi_squared, xi_squared_at

__version__ = "0.1.0"

__all__ = [
    "BeamSplitter",
    "BoundCheck",
    "Circuit",
    "CovarianceError",
    "OptimizationResult",
    "OptimizerConfig",
    "Partition",
    "PartitionError",
    "RayleighProductProblem",
    "Squeezer",
    "SqueezingVerdict",
    "TwoModeSqueezer",
    "build_symplectic_form",
    "compile_symplectic",
    "evolve_covariance",
    "minimize",
    "named_state",
    "remove_correlations",
    "tms2_circuit",
    "tms3_circuit",
    "vacuum_covariance",
    "validate_covariance",
    "xi_squared",
    "xi_squared_at",
]
