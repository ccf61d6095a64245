"""Two-level giant-atom scattering: spectra, contrast, BIC locks, optimization."""

from ._core import (
    Channel,
    ChannelClosed,
    Coefficient,
    ConfigError,
    Direction,
    Objective,
    PhenomConfig,
    PhysicalConfig,
    RatePhaseSet,
    Regime,
    Sense,
    SystemConfig,
    __version__,
    amplitudes,
    bics,
    features,
    load_config,
    optimize,
    parse_config,
    preset,
    preset_names,
    run_cli,
    spectrum,
    verify,
)

__all__ = [
    "Channel",
    "ChannelClosed",
    "Coefficient",
    "ConfigError",
    "Direction",
    "Objective",
    "PhenomConfig",
    "PhysicalConfig",
    "RatePhaseSet",
    "Regime",
    "Sense",
    "SystemConfig",
    "amplitudes",
    "bics",
    "features",
    "load_config",
    "optimize",
    "parse_config",
    "preset",
    "preset_names",
    "run_cli",
    "spectrum",
    "verify",
]
