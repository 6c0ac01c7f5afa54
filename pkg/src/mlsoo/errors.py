"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid run configuration (bad budget, unknown key, ...)."""


class DomainError(ValueError):
    """A requested analytic solution does not exist for the given data."""


class ObjectiveError(RuntimeError):
    """The objective produced an unusable value (NaN or +inf); aborts the run."""
