"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """A computation would exceed the configured memory budget."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine failed to reach its tolerance."""
