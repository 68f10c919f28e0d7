"""Global atmospheric light (veiling light) estimation."""

from __future__ import annotations

import math

import numpy as np

from .imgcore import ChannelTriple, ParameterError, as_gray, as_image, check_same_size

AIRLIGHT_FLOOR = 0.02
DEFAULT_TOP_FRACTION = 0.001


def select_brightest(dark, top_fraction: float = DEFAULT_TOP_FRACTION) -> np.ndarray:
    """Boolean mask of the ``top_fraction`` brightest dark-channel pixels.

    Every pixel tied with the cutoff value is included, so the mask can be
    slightly larger than requested but never depends on pixel order.
    """
    dark = as_gray(dark, "dark channel")
    if not 0 < top_fraction <= 1:
        raise ParameterError(f"top_fraction must be in (0, 1], got {top_fraction}")
    count = max(1, math.ceil(top_fraction * dark.size))
    flat = dark.ravel()
    cutoff = np.partition(flat, flat.size - count)[flat.size - count]
    return dark >= cutoff


def estimate_airlight(image, dark, top_fraction: float = DEFAULT_TOP_FRACTION) -> ChannelTriple:
    """Mean color of ``image`` over the brightest dark-channel pixels.

    ``image`` should be the un-shifted working image; the dark channel only
    locates the most haze-opaque region. Components are clamped to
    [AIRLIGHT_FLOOR, 1] so later normalization by A stays finite.
    """
    image = as_image(image)
    dark = as_gray(dark, "dark channel")
    check_same_size(image, dark, "image and dark channel")
    picked = image[select_brightest(dark, top_fraction)]
    # sorting first makes the sum a function of the multiset only
    mean = np.sort(picked, axis=0).sum(axis=0) / picked.shape[0]
    return ChannelTriple.from_array(np.clip(mean, AIRLIGHT_FLOOR, 1.0))
