"""Dark channel under the four prior modes, plus the blue-to-white RGB shift."""

from __future__ import annotations

import enum

import numpy as np

from .imgcore import ParameterError, as_gray, as_image

DEFAULT_WINDOW_RADIUS = 7


class PriorMode(str, enum.Enum):
    """Which channel set the dark channel is taken over.

    CLASSIC         min over {r, g, b}
    UNDERWATER      min over {g, b} (UDCP)
    RED_COMPLEMENT  min over {1 - r, g, b} (RDCP)
    SHIFTED_RGB     min over {1 - r, 1 - g, b}, i.e. classic on ``shift_rgb(image)``
    """

    CLASSIC = "classic"
    UNDERWATER = "udcp"
    RED_COMPLEMENT = "rdcp"
    SHIFTED_RGB = "shifted"

    @classmethod
    def parse(cls, value) -> "PriorMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ParameterError(f"unknown prior {value!r}; expected one of {choices}") from None


def shift_rgb(image) -> np.ndarray:
    """Map (r, g, b) to (1 - r, 1 - g, b) so that pure blue becomes white."""
    img = as_image(image)
    out = img.copy()
    out[..., 0] = 1.0 - img[..., 0]
    out[..., 1] = 1.0 - img[..., 1]
    return out


def channel_minimum(image, mode=PriorMode.CLASSIC) -> np.ndarray:
    """Per-pixel minimum over the channel set of ``mode`` (no spatial window)."""
    img = as_image(image)
    mode = PriorMode.parse(mode)
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    if mode is PriorMode.CLASSIC:
        return np.minimum(np.minimum(r, g), b)
    if mode is PriorMode.UNDERWATER:
        return np.minimum(g, b)
    if mode is PriorMode.RED_COMPLEMENT:
        return np.minimum(np.minimum(1.0 - r, g), b)
    return np.minimum(np.minimum(1.0 - r, 1.0 - g), b)


def _min_filter_1d(arr: np.ndarray, radius: int, axis: int) -> np.ndarray:
    # van Herk / Gil-Werman: blockwise prefix and suffix minima give any
    # window of width 2r+1 as min(suffix[i], prefix[i + 2r]).
    # Padding with +inf is exactly the clipped-border window.
    width = 2 * radius + 1
    a = np.moveaxis(arr, axis, -1)
    n = a.shape[-1]
    padded_len = -(-(n + 2 * radius) // width) * width
    padded = np.full(a.shape[:-1] + (padded_len,), np.inf)
    padded[..., radius:radius + n] = a
    blocks = padded.reshape(a.shape[:-1] + (padded_len // width, width))
    prefix = np.minimum.accumulate(blocks, axis=-1).reshape(padded.shape)
    suffix = np.minimum.accumulate(blocks[..., ::-1], axis=-1)[..., ::-1].reshape(padded.shape)
    out = np.minimum(suffix[..., :n], prefix[..., 2 * radius:2 * radius + n])
    return np.moveaxis(out, -1, axis)


def min_filter(gray, radius: int) -> np.ndarray:
    """Square erosion with side 2*radius+1, windows clipped at the borders."""
    arr = as_gray(gray)
    radius = _check_radius(radius)
    if radius == 0:
        return arr.copy()
    return _min_filter_1d(_min_filter_1d(arr, radius, 1), radius, 0)


def min_filter_naive(gray, radius: int) -> np.ndarray:
    """O(r^2) per pixel reference erosion."""
    arr = as_gray(gray)
    radius = _check_radius(radius)
    h, w = arr.shape
    out = np.empty_like(arr)
    for y in range(h):
        for x in range(w):
            out[y, x] = arr[max(0, y - radius):y + radius + 1,
                            max(0, x - radius):x + radius + 1].min()
    return out


def dark_channel(image, radius: int = DEFAULT_WINDOW_RADIUS, mode=PriorMode.CLASSIC) -> np.ndarray:
    """Dark channel: spatial minimum over the window of the channel-set minimum."""
    return min_filter(channel_minimum(image, mode), radius)


def _check_radius(radius) -> int:
    if int(radius) != radius or radius < 0:
        raise ParameterError(f"window radius must be an integer >= 0, got {radius}")
    return int(radius)
