"""Statevector VQE with incrementally built, warm-started sliced-ansatz optimization.

Subpackages cover exact Pauli algebra, Heisenberg/Hubbard model construction
with Jordan-Wigner mapping, a dense statevector engine with adjoint gradients,
the two model ansätze, the sliced warm-start optimizer with a standard-VQE
baseline, an exact ground-space oracle, and a declarative experiment runner.
"""

from .errors import (
    CapacityError,
    ConfigError,
    ContractError,
    ConvergenceError,
    DegenerateFermiLevelError,
    DimensionError,
    OptimizationAbortError,
    SliceVqeError,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "ContractError",
    "ConvergenceError",
    "DegenerateFermiLevelError",
    "DimensionError",
    "OptimizationAbortError",
    "SliceVqeError",
]

__version__ = "0.1.0"
