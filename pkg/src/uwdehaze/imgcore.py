"""Shared image types and 8-bit conversion.

Images are plain numpy arrays:

* color images: ``float64`` arrays of shape ``(H, W, 3)``, RGB, values in [0, 1]
* gray images (dark channels, transmission maps): ``(H, W)``, values in [0, 1]
* depth maps: ``(H, W)``, range in meters, values >= 0

The helpers here validate those conventions at public boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


class DimensionError(ValueError):
    """Raised when image shapes are empty or do not agree."""


class ParameterError(ValueError):
    """Raised when a tunable is outside its valid range."""


@dataclass(frozen=True)
class ChannelTriple:
    """Per-channel scalars: attenuation coefficients, veiling light, airlight."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ParameterError(f"channel {name} must be finite and >= 0, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, values) -> "ChannelTriple":
        values = np.asarray(values, dtype=np.float64).ravel()
        if values.size != 3:
            raise ParameterError(f"expected 3 components, got {values.size}")
        return cls(*values.tolist())

    def to_array(self) -> np.ndarray:
        return np.array([self.r, self.g, self.b], dtype=np.float64)

    def to_8bit(self) -> tuple[int, int, int]:
        return tuple(int(v) for v in to_8bit(self.to_array()[None, None, :])[0, 0])

    def max_abs_diff(self, other: "ChannelTriple") -> float:
        return float(np.max(np.abs(self.to_array() - other.to_array())))

    def __iter__(self):
        return iter((self.r, self.g, self.b))


def as_image(image, name: str = "image") -> np.ndarray:
    """Return ``image`` as a float64 ``(H, W, 3)`` array, validating its shape."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} has zero size: {arr.shape}")
    return arr


def as_gray(image, name: str = "gray image") -> np.ndarray:
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must have shape (H, W), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} has zero size: {arr.shape}")
    return arr


def as_depth(depth, name: str = "depth") -> np.ndarray:
    arr = as_gray(depth, name)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ParameterError(f"{name} must be finite and non-negative")
    return arr


def check_same_size(a: np.ndarray, b: np.ndarray, what: str = "inputs") -> None:
    if a.shape[:2] != b.shape[:2]:
        raise DimensionError(f"{what} differ in size: {a.shape[:2]} vs {b.shape[:2]}")


def clamp01(arr: np.ndarray) -> np.ndarray:
    return np.clip(arr, 0.0, 1.0)


def luminance(image: np.ndarray) -> np.ndarray:
    """Rec. 601 luma, the one scalar brightness convention used package-wide."""
    return as_image(image) @ LUMA_WEIGHTS


def from_8bit(image8) -> np.ndarray:
    """Convert an 8-bit RGB raster to a normalized float image (v / 255)."""
    arr = np.asarray(image8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionError(f"8-bit raster must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"8-bit raster has zero size: {arr.shape}")
    return arr.astype(np.float64) / 255.0


def to_8bit(image) -> np.ndarray:
    """Clamp to [0, 1], scale by 255 and round half up."""
    arr = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    return np.floor(arr * 255.0 + 0.5).astype(np.uint8)


def gray_to_8bit(gray) -> np.ndarray:
    return to_8bit(gray)


def gray_to_16bit(gray) -> np.ndarray:
    arr = np.clip(np.asarray(gray, dtype=np.float64), 0.0, 1.0)
    return np.floor(arr * 65535.0 + 0.5).astype(np.uint16)
