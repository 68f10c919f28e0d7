"""Transmission estimation from the normalized hazy image and its refinement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .darkchannel import PriorMode, channel_minimum, min_filter
from .imgcore import (
    ChannelTriple,
    ParameterError,
    as_gray,
    as_image,
    check_same_size,
    luminance,
)
from .airlight import AIRLIGHT_FLOOR

DEFAULT_OMEGA = 0.95
DEFAULT_T0 = 0.1


@dataclass(frozen=True)
class RefineParams:
    """Cross bilateral filter settings.

    ``separable`` runs a horizontal then a vertical 1-D pass (the fast path
    used by the pipeline); otherwise the full square window is evaluated.
    """

    radius: int = 9
    spatial_sigma: float = 6.0
    range_sigma: float = 0.1
    separable: bool = True

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ParameterError(f"refine radius must be an integer >= 1, got {self.radius}")
        if not self.spatial_sigma > 0:
            raise ParameterError(f"spatial_sigma must be > 0, got {self.spatial_sigma}")
        if not self.range_sigma > 0:
            raise ParameterError(f"range_sigma must be > 0, got {self.range_sigma}")


@dataclass(frozen=True)
class TransmissionMap:
    values: np.ndarray
    t0: float

    @property
    def shape(self):
        return self.values.shape


def normalized_channels(hazy, airlight: ChannelTriple, mode=PriorMode.CLASSIC) -> np.ndarray:
    """Channel-set minimum of the hazy image normalized by the airlight.

    For the red-complement prior the red term is ``(1 - I_r) / (1 - A_r)``,
    the normalization that keeps that prior's own haze model consistent.
    """
    hazy = as_image(hazy, "hazy image")
    a = airlight.to_array()
    if np.any(a < AIRLIGHT_FLOOR):
        raise ParameterError(f"airlight components must be >= {AIRLIGHT_FLOOR}, got {tuple(a)}")
    mode = PriorMode.parse(mode)
    if mode is PriorMode.RED_COMPLEMENT:
        red = (1.0 - hazy[..., 0]) / max(1.0 - a[0], AIRLIGHT_FLOOR)
        rest = np.clip(hazy[..., 1:] / a[1:], 0.0, 1.0)
        return np.minimum(np.clip(red, 0.0, 1.0), rest.min(axis=-1))
    if mode is PriorMode.SHIFTED_RGB:
        # the shift only serves airlight estimation; transmission uses classic DCP
        mode = PriorMode.CLASSIC
    return channel_minimum(np.clip(hazy / a, 0.0, 1.0), mode)


def estimate_transmission(hazy, airlight: ChannelTriple, radius: int = 7,
                          omega: float = DEFAULT_OMEGA, mode=PriorMode.CLASSIC) -> np.ndarray:
    """Coarse transmission ``1 - omega * DC(hazy / A)``."""
    if not 0 < omega <= 1:
        raise ParameterError(f"omega must be in (0, 1], got {omega}")
    dark = min_filter(normalized_channels(hazy, airlight, mode), radius)
    return 1.0 - omega * dark


def _gaussian_taps(radius: int, sigma: float) -> np.ndarray:
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    return np.exp(-(d * d) / (2.0 * sigma * sigma))


def _shifted_pairs(n: int, d: int):
    # slices (dst, src) such that dst[i] pairs with src[i] = i + d, clipped
    if d >= 0:
        return slice(0, n - d), slice(d, n)
    return slice(-d, n), slice(0, n + d)


def _bilateral_pass(values: np.ndarray, guide: np.ndarray, radius: int,
                    spatial: np.ndarray, inv_two_var: float) -> np.ndarray:
    # filters along axis 0; callers transpose for the other axis
    n = values.shape[0]
    num = values * spatial[radius]
    den = np.full_like(values, spatial[radius])
    w = np.empty_like(values)
    tmp = np.empty_like(values)
    for d in range(1, min(radius, n - 1) + 1):
        m = n - d
        wd, td = w[:m], tmp[:m]
        np.subtract(guide[d:], guide[:m], out=wd)
        np.square(wd, out=wd)
        np.multiply(wd, -inv_two_var, out=wd)
        np.exp(wd, out=wd)
        np.multiply(wd, spatial[radius + d], out=wd)
        # weights are symmetric in the offset, so one exp serves both sides
        np.multiply(wd, values[d:], out=td)
        num[:m] += td
        den[:m] += wd
        np.multiply(wd, values[:m], out=td)
        num[d:] += td
        den[d:] += wd
    return num / den


def _bilateral_full(values: np.ndarray, guide: np.ndarray, radius: int,
                    spatial: np.ndarray, inv_two_var: float) -> np.ndarray:
    h, w = values.shape
    num = np.zeros_like(values)
    den = np.zeros_like(values)
    for dy in range(-radius, radius + 1):
        ydst, ysrc = _shifted_pairs(h, dy)
        if ydst.stop <= ydst.start:
            continue
        for dx in range(-radius, radius + 1):
            xdst, xsrc = _shifted_pairs(w, dx)
            if xdst.stop <= xdst.start:
                continue
            diff = guide[ysrc, xsrc] - guide[ydst, xdst]
            wt = spatial[radius + dy] * spatial[radius + dx] * np.exp(-(diff * diff) * inv_two_var)
            num[ydst, xdst] += wt * values[ysrc, xsrc]
            den[ydst, xdst] += wt
    return num / den


def cross_bilateral(values, guide, params: RefineParams = RefineParams()) -> np.ndarray:
    """Smooth ``values`` with weights taken from the ``guide`` gray image."""
    values = as_gray(values, "values")
    guide = as_gray(guide, "guide")
    check_same_size(values, guide, "values and guide")
    spatial = _gaussian_taps(params.radius, params.spatial_sigma)
    inv_two_var = 1.0 / (2.0 * params.range_sigma ** 2)
    if params.separable:
        # float32 is ample for a transmission map and halves the memory traffic
        v32 = np.ascontiguousarray(values.T, dtype=np.float32)
        g32 = np.ascontiguousarray(guide.T, dtype=np.float32)
        spatial32 = spatial.astype(np.float32)
        out = _bilateral_pass(v32, g32, params.radius, spatial32, inv_two_var)
        out = _bilateral_pass(np.ascontiguousarray(out.T), g32.T.copy(), params.radius,
                              spatial32, inv_two_var)
        out = out.astype(np.float64)
    else:
        out = _bilateral_full(values, guide, params.radius, spatial, inv_two_var)
    # a convex combination cannot leave the input range; clip away rounding
    return np.clip(out, values.min(), values.max())


def refine_transmission(t, guide, params: RefineParams = RefineParams()) -> np.ndarray:
    """Edge-preserving refinement of ``t`` guided by the luminance of ``guide``."""
    t = as_gray(t, "transmission")
    guide = as_image(guide, "guide")
    check_same_size(t, guide, "transmission and guide")
    return cross_bilateral(t, luminance(guide), params)


def apply_floor(t, t0: float = DEFAULT_T0) -> TransmissionMap:
    if not 0 < t0 < 1:
        raise ParameterError(f"t0 must be in (0, 1), got {t0}")
    t = as_gray(t, "transmission")
    return TransmissionMap(np.clip(t, t0, 1.0), float(t0))
