"""Patch-local gray-world white balance in the Ruderman l-alpha-beta space.

RGB -> LMS uses the Reinhard et al. matrix with each row rescaled to sum to
one, so neutral grays map to L = M = S and hence to zero chroma. The log is
base 10 and inputs are floored at ``LOG_FLOOR`` first. Sign convention: alpha
grows toward yellow (L + M above S) and beta grows toward red (L above M);
a saturated blue therefore has strongly negative alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .imgcore import ParameterError, as_image, clamp01

LOG_FLOOR = 1e-6

_REINHARD_LMS = np.array([
    [0.3811, 0.5783, 0.0402],
    [0.1967, 0.7244, 0.0782],
    [0.0241, 0.1288, 0.8444],
])
RGB_TO_LMS = _REINHARD_LMS / _REINHARD_LMS.sum(axis=1, keepdims=True)
LMS_TO_RGB = np.linalg.inv(RGB_TO_LMS)

LOGLMS_TO_LAB = np.diag([1 / np.sqrt(3), 1 / np.sqrt(6), 1 / np.sqrt(2)]) @ np.array([
    [1.0, 1.0, 1.0],
    [1.0, 1.0, -2.0],
    [1.0, -1.0, 0.0],
])
LAB_TO_LOGLMS = np.linalg.inv(LOGLMS_TO_LAB)


@dataclass(frozen=True)
class WbParams:
    """``patch_radius=None`` means one eighth of the smaller image side."""

    patch_radius: int | None = None
    strength: float = 1.0

    def __post_init__(self):
        if self.patch_radius is not None and (int(self.patch_radius) != self.patch_radius
                                              or self.patch_radius < 1):
            raise ParameterError(f"patch_radius must be an integer >= 1, got {self.patch_radius}")
        if not 0 <= self.strength <= 1:
            raise ParameterError(f"strength must be in [0, 1], got {self.strength}")

    def radius_for(self, shape) -> int:
        if self.patch_radius is not None:
            return int(self.patch_radius)
        return max(1, min(shape[0], shape[1]) // 8)


def rgb_to_lalphabeta(image) -> np.ndarray:
    img = as_image(image)
    lms = np.maximum(img @ RGB_TO_LMS.T, LOG_FLOOR)
    return np.log10(lms) @ LOGLMS_TO_LAB.T


def lalphabeta_to_rgb(lab) -> np.ndarray:
    lab = as_image(lab, "l-alpha-beta image")
    lms = 10.0 ** (lab @ LAB_TO_LOGLMS.T)
    return clamp01(lms @ LMS_TO_RGB.T)


def box_mean(plane, radius: int) -> np.ndarray:
    """Mean over the (2r+1)^2 window, clipped at the borders."""
    plane = np.asarray(plane, dtype=np.float64)
    size = 2 * radius + 1
    total = ndimage.uniform_filter(plane, size, mode="constant")
    count = ndimage.uniform_filter(np.ones_like(plane), size, mode="constant")
    return total / count


def local_gray_world(image, params: WbParams = WbParams()) -> np.ndarray:
    """Remove the neighbourhood-mean chroma from every pixel; l is untouched."""
    img = as_image(image)
    lab = rgb_to_lalphabeta(img)
    radius = params.radius_for(img.shape)
    shift = np.zeros_like(lab)
    for k in (1, 2):
        shift[..., k] = -params.strength * box_mean(lab[..., k], radius)
    # A shift in lαβ is a per-pixel gain in LMS. Applying it to the unfloored
    # LMS values keeps black pixels black and leaves zero-shift pixels exact.
    gain = 10.0 ** (shift @ LAB_TO_LOGLMS.T)
    return clamp01(((img @ RGB_TO_LMS.T) * gain) @ LMS_TO_RGB.T)
