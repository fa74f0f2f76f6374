"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: config problems exit 2,
domain errors exit 3, numerical failures exit 4.
"""


class NontwistError(Exception):
    """Base class for all package errors."""


class ConfigError(NontwistError):
    """Invalid run configuration (bad flag value, malformed config file)."""


class DomainError(NontwistError):
    """Operation evaluated outside its mathematical domain (b = 0, a^2 - 4b < 0, ...)."""


class NumericalError(NontwistError):
    """A numerical procedure failed to meet its contract."""


class DriftBudgetError(NumericalError):
    """Energy drift of an integrated trace exceeded its declared budget."""
