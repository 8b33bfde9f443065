"""Exception hierarchy shared by all fdroof modules."""


class FdroofError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(FdroofError, ValueError):
    """Invalid parameter values or malformed specification data."""


class RegistryParseError(FdroofError):
    """A registry file could not be parsed; message carries the line number."""


class RegistryConflictError(FdroofError):
    """Duplicate or shadowed registry entry."""


class AchievableRatesUnknownError(FdroofError):
    """Machine has no achievable peak rates; ridge point is undefined."""
