"""Stabilised inverse flowline evolution (SIFE) and related sharpening flows."""
from .flows import (
    FlowParams,
    FlowReport,
    gaussian_blur,
    minmod,
    run_flow,
    shock_step_2d,
    sife_step_1d,
    sife_step_2d,
    sild_step_1d,
    sild_step_2d,
)
from .grid import BoundaryPolicy, GridError, Image2D, Signal1D, extend_mirrored, range_stats
from .morphology import StabilityError, StructuringRadius, dilate, erode

__version__ = "0.1.0"
