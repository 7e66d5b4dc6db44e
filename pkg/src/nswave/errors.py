class NSWaveError(Exception):
    """Base class for all package errors."""


class DomainError(NSWaveError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ConfigurationError(NSWaveError, ValueError):
    """Invalid wave configuration or run configuration."""


class ProfileError(NSWaveError, RuntimeError):
    """Shock profile integration did not converge."""


class StepError(NSWaveError, RuntimeError):
    """Time step violates the stability bound."""


class BlowUpError(NSWaveError, RuntimeError):
    """Specific volume left the admissible range during a run."""
