"""Multi-scale estimation of the jump activity index from high-frequency prices."""

from ._backend import BACKEND
from .comparator import (
    AjEstimate,
    aj_confidence_interval,
    aj_count,
    aj_estimate,
    aj_estimate_from_counts,
    aj_standardized_error,
)
from .estimator import (
    ActivityEstimate,
    EstimatorConfig,
    Interval,
    confidence_interval,
    estimate,
    estimate_from_counts,
    jump_count,
    multiscale_increment,
    standardized_error,
    sym_increments,
    weights,
)
from .kernel import KernelConstants, QuadratureError, c_beta, kernel_K, make_constants
from .simulate import SimulationModel, calibrate_theta, sample_standard_stable, simulate_path

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ActivityEstimate",
    "AjEstimate",
    "EstimatorConfig",
    "Interval",
    "KernelConstants",
    "QuadratureError",
    "SimulationModel",
    "aj_confidence_interval",
    "aj_count",
    "aj_estimate",
    "aj_estimate_from_counts",
    "aj_standardized_error",
    "c_beta",
    "calibrate_theta",
    "confidence_interval",
    "estimate",
    "estimate_from_counts",
    "jump_count",
    "kernel_K",
    "make_constants",
    "multiscale_increment",
    "sample_standard_stable",
    "simulate_path",
    "standardized_error",
    "sym_increments",
    "weights",
]
