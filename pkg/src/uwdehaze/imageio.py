"""Lossless image files: PNG and binary netpbm (PPM P6 / PGM P5), via Pillow."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .imgcore import from_8bit, gray_to_16bit, gray_to_8bit, to_8bit

COLOR_SUFFIXES = (".png", ".ppm", ".pnm")
DEPTH_SCALE = 1000.0  # 16-bit depth files hold millimeters


def read_image(path) -> np.ndarray:
    """Read an 8-bit RGB file into a normalized float image."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"))
    except (OSError, ValueError) as exc:
        raise OSError(f"cannot read image {path}: {exc}") from exc
    return from_8bit(arr)


def write_image(path, image) -> None:
    Image.fromarray(to_8bit(image), "RGB").save(Path(path))


def write_gray(path, gray, bits: int = 8) -> None:
    if bits == 8:
        Image.fromarray(gray_to_8bit(gray), "L").save(Path(path))
    elif bits == 16:
        write_gray16(path, gray_to_16bit(gray))
    else:
        raise ValueError(f"bits must be 8 or 16, got {bits}")


def write_gray16(path, values: np.ndarray) -> None:
    Image.fromarray(np.asarray(values, dtype=np.uint16)).save(Path(path))


def read_gray16(path) -> np.ndarray:
    """Raw integer samples of an 8- or 16-bit grayscale file."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            return np.asarray(im).astype(np.int64)
    except (OSError, ValueError) as exc:
        raise OSError(f"cannot read image {path}: {exc}") from exc


def write_depth(path, depth) -> None:
    depth = np.asarray(depth, dtype=np.float64)
    if depth.max(initial=0.0) > 65535 / DEPTH_SCALE:
        raise ValueError(f"depth exceeds {65535 / DEPTH_SCALE} m and cannot be stored")
    write_gray16(path, np.floor(depth * DEPTH_SCALE + 0.5).astype(np.uint16))


def read_depth(path) -> np.ndarray:
    return read_gray16(path) / DEPTH_SCALE


def read_transmission(path) -> np.ndarray:
    return read_gray16(path) / 65535.0
