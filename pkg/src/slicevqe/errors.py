"""Exception types shared across the package."""


class SliceVqeError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(SliceVqeError):
    """Operands act on different qubit counts or mismatched vector lengths."""


class CapacityError(SliceVqeError):
    """Requested object exceeds a hard size cap (dense matrices, statevectors)."""


class ContractError(SliceVqeError):
    """An input violates a documented precondition (hermiticity, commutation, tiling)."""


class DegenerateFermiLevelError(SliceVqeError):
    """Fermi level of the single-particle spectrum is degenerate; the Slater
    determinant is ill-defined.  Perturb the hopping amplitude or change the filling."""


class ConvergenceError(SliceVqeError):
    """Iterative eigensolver failed to converge within its matvec budget."""


class OptimizationAbortError(SliceVqeError):
    """Objective returned a non-finite value; carries the best iterate seen so far."""

    def __init__(self, message, best_x=None, best_value=None, cost_evals=0, grad_evals=0):
        super().__init__(message)
        self.best_x = best_x
        self.best_value = best_value
        self.cost_evals = cost_evals
        self.grad_evals = grad_evals


class ConfigError(SliceVqeError):
    """Experiment configuration is malformed or inconsistent."""
