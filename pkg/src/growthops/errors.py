"""Exception types raised across the package."""


class DomainError(ValueError):
    """A point lies outside the domain of a symbol (e.g. |z| >= 1 for a series)."""


class ResourceCapError(RuntimeError):
    """A symbolic operation would exceed the configured term cap."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class HypothesisMismatch(ValueError):
    """No admissible n0 makes the finiteness pattern of a compactness theorem hold."""


class ConfigError(ValueError):
    """A configuration or symbol file could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
