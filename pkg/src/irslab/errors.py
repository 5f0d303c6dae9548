"""Exception types shared across the package."""


class IrsLabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IrsLabError, ValueError):
    """An argument lies outside a function's stated domain."""


class ConvergenceError(IrsLabError, RuntimeError):
    """An iterative numerical routine failed to reach its tolerance.

    Carries the best estimate so far and the error bound achieved, so a
    caller can decide whether the partial result is still usable.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ConfigError(IrsLabError, ValueError):
    """A system configuration violates one of its invariants."""


class SweepPointError(IrsLabError, RuntimeError):
    """A Monte Carlo sweep point failed; partial records are preserved.

    ``records`` holds the completed points in order, ``axis_value`` names
    the point that failed.
    """

    def __init__(self, message, axis_value, records):
        super().__init__(message)
        self.axis_value = axis_value
        self.records = records
