"""
Exception hierarchy. Every error carries the CLI exit code it maps to.
"""
from typing import Optional


class BitAssistError(Exception):
    """Base class for all package errors"""

    exit_code: int = 1

    def __init__(self, message: str, *, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self) -> str:
        if self.detail:
            return f"{self.message} ({self.detail})"
        return self.message


class InputValidationError(BitAssistError):
    """Malformed or inconsistent input: files, parameters, alphabets"""

    exit_code = 2


class DimensionMismatchError(InputValidationError):
    """Operators or vectors of incompatible shape"""


class InfeasibleMultipliersError(InputValidationError):
    """Dual multipliers or strategy states outside the feasibility tolerances"""


class SolverError(BitAssistError):
    """A numerical routine hit its iteration or pivot cap"""

    exit_code = 3


class BudgetExceededError(SolverError):
    """Protocol enumeration would exceed the configured budget"""

    def __init__(self, budget: int, cardinality: int, what: str = "encoder combinations"):
        super().__init__(
            f"Enumeration budget exceeded: {cardinality} {what} > budget {budget}"
        )
        self.budget = budget
        self.cardinality = cardinality


class CertificateMismatchError(BitAssistError):
    """A certificate or oracle check attached to a result did not verify"""

    exit_code = 4
