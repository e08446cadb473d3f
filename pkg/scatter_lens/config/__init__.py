"""Configuration management for scatter-lens."""

from .settings import (
    DirectConfig,
    InverseConfig,
    RunDefaults,
    SpectralConfig,
    direct_config,
    inverse_config,
    run_defaults,
    settings,
    spectral_config,
)

__all__ = [
    "settings",
    "spectral_config",
    "direct_config",
    "inverse_config",
    "run_defaults",
    "SpectralConfig",
    "DirectConfig",
    "InverseConfig",
    "RunDefaults",
]
