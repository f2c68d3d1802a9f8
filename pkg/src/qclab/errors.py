"""Exception types shared across the toolkit."""


class ConfigurationError(ValueError):
    """Invalid grid, scenario or parameter setup."""


class DomainError(ValueError):
    """An argument lies outside the admissible range of an operation."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (divergence, loss of injectivity, ...)."""
