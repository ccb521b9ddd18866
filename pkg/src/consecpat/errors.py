"""Exception types shared across the package."""


class ConsecPatError(Exception):
    """Base class; ``code`` is the CLI exit status for this error kind."""

    code = 1


class InvalidInputError(ConsecPatError, ValueError):
    code = 3


class DomainError(ConsecPatError, ValueError):
    """Input is well formed but outside the region where the quantity is defined."""

    code = 4


class ResourceLimitError(ConsecPatError, RuntimeError):
    """Exhaustive enumeration requested beyond a hard cap."""

    code = 5
