"""Image quality measures for synthetic-scene evaluation."""

from __future__ import annotations

import numpy as np

from .darkchannel import DEFAULT_WINDOW_RADIUS, PriorMode, dark_channel
from .imgcore import DimensionError, as_image, check_same_size, luminance


def rmse(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"images differ in shape: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def mae(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_size(a, b, "maps")
    return float(np.mean(np.abs(a - b)))


def global_contrast(image) -> float:
    """Standard deviation of luminance."""
    return float(np.std(luminance(as_image(image))))


def dark_channel_mean(image, radius: int = DEFAULT_WINDOW_RADIUS, mode=PriorMode.CLASSIC) -> float:
    return float(np.mean(dark_channel(image, radius, mode)))
