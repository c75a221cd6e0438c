"""Bounds and constructions for Max kXOR: depth-1 QAOA and threshold-algorithm
performance, zero-temperature Parisi values, and partial-Z2 obstruction instances."""

__version__ = "0.1.0"

from .instances import (
    GenerationError,
    InstanceFormatError,
    XorInstance,
    brute_force_optimum,
    check_triangle_free,
    evaluate_fraction,
    generate_regular_triangle_free,
    read_instance,
    write_instance,
)
from .parisi import MixedXi, ParisiResult, ParisiSettings, StepOrderParam, evaluate_functional, minimize_parisi
from .qaoa import QaoaAngles, QaoaClosedFormResult, closed_form_regular, closed_form_triangle_free, optimize_finite_D
from .threshold import ThresholdQuantities, exact_F, large_d_constant_threshold, monte_carlo_run, optimize_mu

__all__ = [
    "GenerationError",
    "InstanceFormatError",
    "MixedXi",
    "ParisiResult",
    "ParisiSettings",
    "QaoaAngles",
    "QaoaClosedFormResult",
    "StepOrderParam",
    "ThresholdQuantities",
    "XorInstance",
    "brute_force_optimum",
    "check_triangle_free",
    "closed_form_regular",
    "closed_form_triangle_free",
    "evaluate_fraction",
    "evaluate_functional",
    "exact_F",
    "generate_regular_triangle_free",
    "large_d_constant_threshold",
    "minimize_parisi",
    "monte_carlo_run",
    "optimize_finite_D",
    "optimize_mu",
    "read_instance",
    "write_instance",
]
