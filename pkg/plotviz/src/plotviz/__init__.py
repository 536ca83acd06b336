"""Sign-split space-time rendering of simulator trajectory files."""

from .render import (
    PlotInputError,
    PlotJob,
    RenderResult,
    load_meta,
    load_trajectory,
    render,
    sign_classes,
)

__version__ = "0.1.0"

__all__ = [
    "PlotInputError",
    "PlotJob",
    "RenderResult",
    "load_meta",
    "load_trajectory",
    "render",
    "sign_classes",
]
