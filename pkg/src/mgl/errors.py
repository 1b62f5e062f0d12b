"""Shared exception types."""


class DomainError(ValueError):
    """Input lies outside an operation's mathematical domain."""


class ResourceError(RuntimeError):
    """A configured resource budget was exceeded.

    ``high_water`` carries the peak resource usage observed before giving up
    (live coset count for enumerations, the unfactored cofactor for
    factorization, and so on), when meaningful.
    """

    def __init__(self, message, high_water=None):
        super().__init__(message)
        self.high_water = high_water


class PrecisionError(ResourceError):
    """Working precision retries were exhausted without a readable valuation."""


class InternalError(RuntimeError):
    """A branch that exhaustiveness arguments say is unreachable was reached."""
