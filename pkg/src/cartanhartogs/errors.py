"""Shared exception types."""


class ShapeError(ValueError):
    """An array argument has the wrong shape for the domain."""


class DomainError(ValueError):
    """A point violates a domain constraint (membership, sign, feasibility)."""


class ConvergenceError(RuntimeError):
    """An iterative routine (Newton, auto-refined quadrature) did not converge."""
