"""Exception hierarchy shared across the package."""


class ConfigError(ValueError):
    """A parameter, config file, or grid fails validation before any computation."""


class ResolutionError(ConfigError):
    """The frequency grid is too coarse to resolve the etalon comb."""


class NumericalConsistencyError(RuntimeError):
    """A self-check on the quadrature failed (non-real integral, negative rate)."""
