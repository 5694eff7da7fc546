"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input value violates a documented precondition."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class DegenerateMomentError(ValidationError):
    """A coefficient construction divides by a moment that is (numerically) zero."""


class ScenarioError(ValidationError):
    """A scenario file is missing, malformed, or fails validation."""
