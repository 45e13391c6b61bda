"""Exception types raised across the package."""


class DomainError(ValueError):
    """A point lies outside the region an operation is defined on."""


class PrecisionError(ValueError):
    """Requested row precision is too small for a sequence element."""


class CapacityError(RuntimeError):
    """An exhaustive enumeration would be too large to carry out."""

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension


class ToleranceNotMet(RuntimeError):
    """An iterative integrator stopped at its depth cap without converging."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
