"""Polarimetric imaging and detection-evaluation toolkit."""

from ._core import (
    DEFAULT_LAYOUT,
    Aop,
    PolarkitError,
    StokesVector,
    aop,
    average_precision,
    dop,
    encode,
    error_rate_evolution,
    forward_quad,
    gaussian_sample,
    intensity_at,
    iou,
    render_raw,
    rotate_frame,
    split,
    stokes_from_quad,
    stokes_planes,
    subsample,
    weighted_map,
    wrap_aop,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LAYOUT",
    "Aop",
    "PolarkitError",
    "StokesVector",
    "aop",
    "average_precision",
    "dop",
    "encode",
    "error_rate_evolution",
    "forward_quad",
    "gaussian_sample",
    "intensity_at",
    "iou",
    "render_raw",
    "rotate_frame",
    "split",
    "stokes_from_quad",
    "stokes_planes",
    "subsample",
    "weighted_map",
    "wrap_aop",
]
