"""Exception types shared across the package."""


class CVDynError(Exception):
    """Base class for package-specific failures."""


class InvalidStateError(CVDynError, ValueError):
    """A covariance matrix violates a physicality requirement."""


class NumericalError(CVDynError, RuntimeError):
    """A numerical routine (quadrature, eigen-solve, ODE step) failed."""


class UnstableSystemError(CVDynError, ValueError):
    """Requested parameters put the model outside its stable regime."""


class ConfigError(CVDynError, ValueError):
    """A scenario configuration failed to parse or validate."""
