"""Offline figure rendering for fourns experiment CSVs."""

from .render import (
    ACL_DECAY,
    DRIFT,
    GROWTH,
    KINDS,
    LAB_CONSTANTS,
    CrossCheckError,
    PlotSpec,
    RenderResult,
    SchemaError,
    render,
)

__all__ = [
    "ACL_DECAY",
    "DRIFT",
    "GROWTH",
    "KINDS",
    "LAB_CONSTANTS",
    "CrossCheckError",
    "PlotSpec",
    "RenderResult",
    "SchemaError",
    "render",
]
