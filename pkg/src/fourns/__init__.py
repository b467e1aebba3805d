"""2D pseudo-spectral fourth-order NLS simulator with cutoff-smoothing
(almost-conservation) instrumentation."""

from .dynamics import IFRK4, STRANG, BlowUpError, SimConfig, StepperState
from .multipliers import IMultiplier, LPProjector
from .spectral import Field, Grid2D

__all__ = [
    "BlowUpError",
    "Field",
    "Grid2D",
    "IFRK4",
    "IMultiplier",
    "LPProjector",
    "STRANG",
    "SimConfig",
    "StepperState",
]
