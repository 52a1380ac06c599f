"""Exception types shared across the package."""


class ModelValidityError(ValueError):
    """The supplied correlation structure is not a valid joint Gaussian model."""


class SpectrumDegeneracyError(RuntimeError):
    """Eigenvalue degeneracy the closed form cannot resolve; use the Monte Carlo path."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
