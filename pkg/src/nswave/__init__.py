"""Stability of composite viscous-shock and rarefaction waves for barotropic Navier-Stokes.

Set ``NSWAVE_DISABLE_NUMBA=1`` before import to run the pure numpy kernels.
"""
from ._jit import backend_name
from .config import RunConfig, baseline_config, parse_config
from .errors import BlowUpError, ConfigurationError, DomainError, NSWaveError, ProfileError, StepError
from .euler_waves import WaveConfig
from .thermo import GasParams

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "ConfigurationError", "DomainError", "GasParams", "NSWaveError", "ProfileError",
    "RunConfig", "StepError", "WaveConfig", "backend_name", "baseline_config", "parse_config",
]
