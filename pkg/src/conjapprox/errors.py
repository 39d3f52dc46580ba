"""Exception hierarchy shared by every module.

The CLI maps each class to its own exit status, so library code raises the
most specific class that applies.
"""


class ConjApproxError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(ConjApproxError, ValueError):
    """Malformed input: bad parameters, unparsable point syntax, etc."""

    exit_code = 2


class InfeasibleError(ConjApproxError):
    """A construction cannot be carried out within its stated budget."""

    exit_code = 3

    def __init__(self, message, stage=None, details=None):
        super().__init__(message)
        self.stage = stage
        self.details = details or {}


class PrecisionExhausted(ConjApproxError):
    """Interval arithmetic could not decide a question at maximum precision."""

    exit_code = 4


class DegenerateInput(ConfigError):
    """Input violates a non-degeneracy requirement (zero vector, torsion ratio, ...)."""
