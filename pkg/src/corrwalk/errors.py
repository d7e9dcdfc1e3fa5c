"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """An argument, spec, or configuration value violates its contract."""


class InsufficientDataError(ValueError):
    """Too few data points for the requested fit or average."""


class DegenerateSeriesError(ValueError):
    """A series contains values (e.g. zeros) that make a log-log fit undefined."""


class ResourceLimitError(RuntimeError):
    """A run was refused because it exceeds the configured resource cap."""
