"""Scene radiance recovery and final brightening."""

from __future__ import annotations

import numpy as np

from .imgcore import ChannelTriple, ParameterError, as_image, check_same_size, clamp01, luminance
from .transmission import TransmissionMap

AUTO_PERCENTILE = 99.0
AUTO_TARGET = 0.95


def recover_radiance(hazy, airlight: ChannelTriple, t) -> np.ndarray:
    """Invert ``I = J t + A (1 - t)`` for J, channelwise, and clamp.

    ``t`` is a TransmissionMap or an array, either ``(H, W)`` (one t for all
    channels) or ``(H, W, 3)`` (per-channel t).
    """
    hazy = as_image(hazy, "hazy image")
    values = t.values if isinstance(t, TransmissionMap) else np.asarray(t, dtype=np.float64)
    check_same_size(hazy, values, "hazy image and transmission")
    if np.any(values <= 0):
        raise ParameterError("transmission must be > 0 everywhere; apply a floor first")
    if values.ndim == 2:
        values = values[..., None]
    a = airlight.to_array()
    return clamp01((hazy - a) / values + a)


def brighten(image, gain: float = 1.0, gamma: float = 1.0) -> np.ndarray:
    """``clamp((gain * v) ** (1 / gamma))`` per channel."""
    if not gain > 0 or not gamma > 0:
        raise ParameterError(f"gain and gamma must be > 0, got gain={gain}, gamma={gamma}")
    img = as_image(image)
    scaled = np.clip(gain * img, 0.0, None)
    if gamma != 1.0:
        scaled = scaled ** (1.0 / gamma)
    return clamp01(scaled)


def auto_gain(image, percentile: float = AUTO_PERCENTILE, target: float = AUTO_TARGET) -> float:
    """Gain mapping the given luminance percentile to ``target``; never below 1."""
    level = float(np.percentile(luminance(image), percentile))
    if level <= 0:
        return 1.0
    return max(1.0, target / level)
