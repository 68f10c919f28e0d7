"""Forward simulator of underwater image formation.

The sensed image is the sum of direct transmission, forward scatter and
backscatter::

    E_d = E_o * exp(-c * r)
    E_f = w_f * blur_sigma(r)(E_d)
    E_b = B_inf * (1 - exp(-c * r))
    E_T = clamp(E_d + E_f + E_b)

With ``w_f = 0`` this is exactly the haze model ``I = J t + A (1 - t)`` with
``t = exp(-c r)`` and ``A = B_inf``, which is what makes the simulator usable as
ground truth for the dehazing pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .imgcore import (
    ChannelTriple,
    ParameterError,
    as_depth,
    as_image,
    check_same_size,
    clamp01,
)

DEFAULT_ATTENUATION = ChannelTriple(0.6, 0.1, 0.05)
DEFAULT_FORWARD_WEIGHT = 0.1
MAX_SIGMA_BANDS = 8


@dataclass(frozen=True)
class PsfParams:
    """Gaussian forward-scatter PSF with sigma = blur_scale * r pixels."""

    blur_scale: float = 0.0
    weight: float = DEFAULT_FORWARD_WEIGHT

    def __post_init__(self):
        if not self.blur_scale >= 0:
            raise ParameterError(f"blur_scale must be >= 0, got {self.blur_scale}")
        if not self.weight >= 0:
            raise ParameterError(f"forward-scatter weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class SceneSpec:
    radiance: np.ndarray
    depth: np.ndarray
    attenuation: ChannelTriple = DEFAULT_ATTENUATION
    veiling: ChannelTriple = ChannelTriple(0.2, 0.6, 0.8)
    psf: PsfParams = field(default_factory=PsfParams)

    def __post_init__(self):
        radiance = clamp01(as_image(self.radiance, "radiance"))
        depth = as_depth(self.depth)
        check_same_size(radiance, depth, "radiance and depth")
        _check_attenuation(self.attenuation)
        _check_veiling(self.veiling)
        object.__setattr__(self, "radiance", radiance)
        object.__setattr__(self, "depth", depth)

    def transmission(self) -> np.ndarray:
        """Per-channel ground-truth transmission exp(-c * r), shape (H, W, 3)."""
        return channel_transmission(self.depth, self.attenuation)

    def wideband_transmission(self) -> np.ndarray:
        """exp(-c_min * r): the single-channel transmission DCP estimates."""
        return np.exp(-min(self.attenuation) * self.depth)


def _check_attenuation(c: ChannelTriple) -> None:
    if min(c) <= 0:
        raise ParameterError(f"attenuation coefficients must be > 0, got {tuple(c)}")


def _check_veiling(b: ChannelTriple) -> None:
    if min(b) <= 0 or max(b) > 1:
        raise ParameterError(f"veiling light components must be in (0, 1], got {tuple(b)}")


def channel_transmission(depth, attenuation: ChannelTriple) -> np.ndarray:
    depth = as_depth(depth)
    return np.exp(-depth[..., None] * attenuation.to_array())


def direct_transmission(radiance, depth, attenuation: ChannelTriple) -> np.ndarray:
    radiance = as_image(radiance, "radiance")
    depth = as_depth(depth)
    check_same_size(radiance, depth, "radiance and depth")
    _check_attenuation(attenuation)
    return radiance * channel_transmission(depth, attenuation)


def gaussian_blur(image, sigma: float) -> np.ndarray:
    image = np.asarray(image, dtype=np.float64)
    if sigma <= 0:
        return image.copy()
    sigmas = (sigma, sigma, 0) if image.ndim == 3 else sigma
    return ndimage.gaussian_filter(image, sigmas, mode="nearest", truncate=4.0)


def variable_blur(image, sigma_map, bands: int = MAX_SIGMA_BANDS) -> np.ndarray:
    """Gaussian blur whose sigma varies per pixel.

    ``sigma_map`` is quantized onto at most ``bands`` evenly spaced levels from
    0 to its maximum; the image is blurred once per level and each pixel
    interpolates linearly between its two neighbouring levels.
    """
    image = np.asarray(image, dtype=np.float64)
    sigma_map = np.asarray(sigma_map, dtype=np.float64)
    top = float(sigma_map.max())
    if top <= 0:
        return image.copy()
    levels = np.linspace(0.0, top, max(2, bands))
    pos = sigma_map / top * (len(levels) - 1)
    lo = np.minimum(np.floor(pos).astype(int), len(levels) - 2)
    frac = pos - lo
    out = np.zeros_like(image)
    previous = gaussian_blur(image, levels[0])
    for i in range(len(levels) - 1):
        current = gaussian_blur(image, levels[i + 1])
        sel = lo == i
        if np.any(sel):
            f = frac[sel][:, None] if image.ndim == 3 else frac[sel]
            out[sel] = (1.0 - f) * previous[sel] + f * current[sel]
        previous = current
    return out


def forward_scatter(direct, depth, psf: PsfParams) -> np.ndarray:
    """Additive forward-scatter term ``w_f * blur(direct)``; zero when blur_scale is 0."""
    direct = as_image(direct, "direct transmission")
    depth = as_depth(depth)
    check_same_size(direct, depth, "direct transmission and depth")
    if psf.blur_scale == 0:
        return np.zeros_like(direct)
    return psf.weight * variable_blur(direct, psf.blur_scale * depth)


def backscatter(veiling: ChannelTriple, depth, attenuation: ChannelTriple) -> np.ndarray:
    depth = as_depth(depth)
    _check_veiling(veiling)
    _check_attenuation(attenuation)
    return veiling.to_array() * (1.0 - channel_transmission(depth, attenuation))


def synthesize(scene: SceneSpec) -> np.ndarray:
    """Render the hazy image E_T of ``scene``."""
    direct = direct_transmission(scene.radiance, scene.depth, scene.attenuation)
    forward = forward_scatter(direct, scene.depth, scene.psf)
    back = backscatter(scene.veiling, scene.depth, scene.attenuation)
    return clamp01(direct + forward + back)
