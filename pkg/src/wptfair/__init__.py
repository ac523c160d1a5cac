"""Fair multi-sensor wireless power transfer with a logarithmic harvesting model.

The package offers rectifier-curve fitting, Rayleigh/path-loss channels,
band selection, per-round power allocation (total-maximising and max-min
fair), a seeded mobile-network simulator and brute-force oracles.
"""

from ._jit import NUMBA_ENABLED
from .allocation import (
    AllocationProblem,
    AllocationResult,
    crpm,
    epd,
    lcrpm,
    ltrpm,
    transmit_caps,
    trpm,
)
from .channel import PathLossParams, beamforming_gain, path_loss, sample_channel
from .ehmodel import LinearEhParams, LogEhParams, fit_linear, fit_log, harvest_log
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InsufficientDataError,
    NoInteriorLevel,
    WptError,
)
from .selection import SelectionState, round_robin, ssep
from .simulator import SimConfig, SimTrace, metrics, run

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "AllocationProblem",
    "AllocationResult",
    "crpm",
    "epd",
    "lcrpm",
    "ltrpm",
    "transmit_caps",
    "trpm",
    "PathLossParams",
    "beamforming_gain",
    "path_loss",
    "sample_channel",
    "LinearEhParams",
    "LogEhParams",
    "fit_linear",
    "fit_log",
    "harvest_log",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "InsufficientDataError",
    "NoInteriorLevel",
    "WptError",
    "SelectionState",
    "round_robin",
    "ssep",
    "SimConfig",
    "SimTrace",
    "metrics",
    "run",
]
