"""Gaussian multiple-access channels: entanglement-assisted rates vs product-input bounds."""
from .capacity import (
    ConstraintsA,
    ConstraintsB,
    OutOfRegimeError,
    RatePoint,
    enhancement_ratio_a,
    enhancement_ratio_b,
    threshold_a,
    threshold_b,
)
from .channels import SchemeAConfig, SchemeBConfig, simulate_scheme_a, simulate_scheme_b
from .gaussian import GaussianState, SymplecticOp, UnphysicalStateError

__version__ = "0.1.0"

__all__ = [
    "ConstraintsA",
    "ConstraintsB",
    "GaussianState",
    "OutOfRegimeError",
    "RatePoint",
    "SchemeAConfig",
    "SchemeBConfig",
    "SymplecticOp",
    "UnphysicalStateError",
    "enhancement_ratio_a",
    "enhancement_ratio_b",
    "simulate_scheme_a",
    "simulate_scheme_b",
    "threshold_a",
    "threshold_b",
]
