"""Space-efficient streamed Jacobi symbols and the Jacobi factoring circuit, simulated."""

from .engine import CostReport, EngineConfig, cost_model, jacobi_streamed
from .numtheory import Factorization, Fraction, jacobi_reference

__version__ = "0.1.0"

__all__ = [
    "CostReport",
    "EngineConfig",
    "Factorization",
    "Fraction",
    "cost_model",
    "jacobi_reference",
    "jacobi_streamed",
]
