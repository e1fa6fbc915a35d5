"""Exception types shared across the package."""


class StarlabError(Exception):
    """Base class for all package errors."""


class ModeMismatch(StarlabError, ValueError):
    """Two symbols (or a symbol and a point) disagree on the number of modes."""


class NonConvergence(StarlabError, ArithmeticError):
    """A series did not reach its tolerance within the allowed number of terms."""


class DomainError(StarlabError, ValueError):
    """Argument outside the domain of a function."""


class TruncationError(StarlabError):
    """A truncated Fock space is too small for the requested accuracy."""


class ParseError(StarlabError, ValueError):
    """Malformed symbol JSON or command-line input."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position


class ConfigError(StarlabError, ValueError):
    """Invalid run configuration."""
