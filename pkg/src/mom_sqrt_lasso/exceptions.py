"""Error hierarchy shared by every layer of the package."""

from typing import Dict, Optional


class MomLassoError(Exception):
    """Base class for all errors raised by mom_sqrt_lasso."""


class InvalidInputError(MomLassoError, ValueError):
    """An argument violates a documented precondition."""


class InfeasibleConfigurationError(MomLassoError, ValueError):
    """The requested configuration cannot be run on the given data (e.g. K > n)."""


class DatasetParseError(InvalidInputError):
    """A dataset CSV could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverDivergedError(MomLassoError, ArithmeticError):
    """The saddle-point iteration produced a non-finite gradient."""

    def __init__(self, iteration: int, detail: str = "non-finite gradient") -> None:
        self.iteration = iteration
        super().__init__(f"solver diverged at iteration {iteration}: {detail}")


class MissingTraceError(MomLassoError, LookupError):
    """An objective trace was requested from a run that did not record one."""


class AggregationError(MomLassoError, RuntimeError):
    """Every level of the adaptive sweep failed."""

    def __init__(self, failures: Dict[int, Exception]) -> None:
        self.failures = dict(failures)
        summary = ", ".join(f"s={s}: {exc}" for s, exc in sorted(self.failures.items()))
        super().__init__(f"all sparsity levels failed ({summary})")


class InsufficientDataError(MomLassoError, ValueError):
    """Not enough distinct points to fit a rate slope."""
