"""Exception taxonomy shared across the package.

Everything raised on purpose derives from :class:`TTInheritError`, so callers
can catch package errors without swallowing genuine bugs.  The subclasses
also inherit from the closest builtin (ValueError / RuntimeError) so that
code written against the builtins keeps working.
"""


class TTInheritError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TTInheritError, ValueError):
    """An index, index set, or argument lies outside its declared domain."""


class StructuralError(TTInheritError, ValueError):
    """A core chain violates the tensor-train structural invariants."""


class NumericError(TTInheritError, ValueError):
    """Non-finite values where finite floating-point input is required."""


class SamplingError(TTInheritError, ValueError):
    """A without-replacement sample request exceeds its pool."""


class RankZeroError(TTInheritError, ValueError):
    """A compact SVD was requested for a numerically zero matrix."""


class SingularityError(TTInheritError, RuntimeError):
    """A sampled row/column block is numerically rank deficient."""


class CapacityError(TTInheritError, RuntimeError):
    """A dense materialization would exceed the configured element cap."""


class SearchError(TTInheritError, RuntimeError):
    """A pivot search exhausted its candidates without reaching the target rank."""


class GenerationError(TTInheritError, RuntimeError):
    """Random generation kept producing rank-deficient tensors."""


class TrialError(TTInheritError, RuntimeError):
    """An experiment trial could not satisfy its rank hypotheses in budget."""


class ConfigError(TTInheritError, ValueError):
    """Invalid or inconsistent experiment configuration."""
