"""Exception hierarchy shared by every module.

Each class carries a ``category`` string that the batch runner turns into a
machine-readable error tag and an exit status.
"""


class SymRidgeError(Exception):
    """Base class for all package errors."""

    category = "error"
    exit_code = 1


class ConfigurationError(SymRidgeError, ValueError):
    """Bad model tag, grid mismatch, missing cache or invalid parameter."""

    category = "configuration"
    exit_code = 2

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DomainError(SymRidgeError, ValueError):
    """A point lies outside the valid domain of the active model."""

    category = "domain"
    exit_code = 3


class DecompositionError(SymRidgeError, ValueError):
    """A matrix factorization failed (input not SPD)."""

    category = "decomposition"
    exit_code = 3


class EvaluationError(SymRidgeError, ArithmeticError):
    """A special function was evaluated on one of its poles."""

    category = "evaluation"
    exit_code = 3


class DegeneratePairError(SymRidgeError, ArithmeticError):
    """The pair (sigma, rho) has a vanishing or divergent scalar product."""

    category = "degenerate_pair"
    exit_code = 3
