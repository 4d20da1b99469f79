"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Input data or parameters violate a documented precondition."""


class InsufficientDataError(InvalidInputError):
    """A data segment is too short for the requested estimator."""
