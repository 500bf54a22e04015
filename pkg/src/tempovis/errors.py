"""Exception types raised by tempovis."""


class TempovisError(ValueError):
    """Base class for all validation failures raised by this package."""


class DomainError(TempovisError):
    """An argument lies outside the domain of an operation."""


class ParseError(TempovisError):
    """Input text could not be turned into valid domain objects.

    ``rows`` holds the 1-based line numbers (header is line 1) involved.
    """

    def __init__(self, message: str, rows: tuple[int, ...] = ()):
        super().__init__(message)
        self.rows = rows
