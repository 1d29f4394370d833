class QaoactlError(Exception):
    """Base error for qaoactl."""


class ConfigError(QaoactlError):
    """Configuration is invalid."""


class InvalidInputError(QaoactlError, ValueError):
    """An argument violates an operation's preconditions."""


class CoefficientError(InvalidInputError):
    """Penalty coefficients violate the sufficient condition for the encoding."""


class ScopeError(InvalidInputError):
    """Closed-form evaluation requested outside its scope."""


class BudgetError(QaoactlError):
    """Problem size exceeds an enumeration or simulation ceiling."""


class ConsistencyError(QaoactlError):
    """An internal cross-check failed."""


class ReportIOError(QaoactlError):
    """Reading or writing a report or fixture failed."""


class EvaluationError(QaoactlError):
    """A loss evaluator raised during a chain run."""

    def __init__(self, message: str, epoch: int) -> None:
        super().__init__(message)
        self.epoch = epoch
