"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConsistencyError(ArithmeticError):
    """A computed probability left [0, 1] by more than roundoff can explain."""


class NormError(ValueError):
    """An input vector is malformed or has Euclidean norm above 1."""


class RoundCapExceeded(RuntimeError):
    """Rerun-based full coloring needed more rounds than allowed."""
