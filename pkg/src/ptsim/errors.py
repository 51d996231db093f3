"""Exception types raised across the package."""


class PTSimError(Exception):
    """Base class for all ptsim errors."""


class InvalidArgumentError(PTSimError, ValueError):
    """An input violates a documented precondition (shape, range, dimension)."""


class DomainError(PTSimError, ArithmeticError):
    """A well-formed input lies outside the region where the operation is defined."""
