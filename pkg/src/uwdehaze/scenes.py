"""Procedural test scenes for the formation simulator.

Depth layouts follow three shapes: a seabed ramp receding to open water,
a near structure in front of open water (step edge), and a fronto-parallel
wall. Radiance is a seabed-like texture: blocks of natural colors (neutral on
average, as gray-world white balance assumes) with dense small shadows, so
every 15x15 window contains a (near) black pixel, plus an optional bright,
shadow-free sand patch near the camera, the classic case where the
dark-channel prior does not hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .formation import PsfParams, SceneSpec
from .imgcore import ChannelTriple

MAX_DEPTH = 65.0

# natural materials, chosen so the palette mean is close to neutral gray
PALETTE = np.array([
    [0.76, 0.70, 0.50],  # sand
    [0.45, 0.44, 0.42],  # rock
    [0.26, 0.25, 0.26],  # dark rock
    [0.30, 0.48, 0.20],  # algae
    [0.62, 0.32, 0.18],  # rust
    [0.85, 0.45, 0.35],  # coral
    [0.35, 0.42, 0.72],  # sponge
    [0.55, 0.32, 0.62],  # urchin
    [0.22, 0.55, 0.60],  # anemone
    [0.80, 0.80, 0.84],  # painted structure
])


def ramp_depth(height: int, width: int, near: float, far: float, horizon: float = 0.35) -> np.ndarray:
    """Flat seabed seen at an angle: rows above ``horizon`` (fraction of height)
    are open water at ``far``; below it depth falls as 1/(row - horizon) to
    ``near`` at the bottom row."""
    rows = np.arange(height, dtype=np.float64)
    y_h = horizon * (height - 1)
    with np.errstate(divide="ignore"):
        depth = near * (height - 1 - y_h) / (rows - y_h)
    depth = np.where(rows > y_h, np.minimum(depth, far), far)
    return np.repeat(depth[:, None], width, axis=1)


def step_depth(height: int, width: int, near: float, far: float, edge: float = 0.5) -> np.ndarray:
    """Structure at ``near`` filling the columns left of ``edge``; open water beyond."""
    depth = np.full((height, width), float(far))
    depth[:, : int(round(edge * width))] = near
    return depth


def wall_depth(height: int, width: int, distance: float, far: float, top: float = 0.3) -> np.ndarray:
    """Fronto-parallel wall at ``distance`` below the top ``top`` fraction of open water."""
    depth = np.full((height, width), float(distance))
    depth[: int(round(top * height))] = far
    return depth


def seabed_radiance(height: int, width: int, rng: np.random.Generator, block: int = 12,
                    shadow_spacing: int = 6, sand_patch: tuple[int, int, int, int] | None = None
                    ) -> np.ndarray:
    """Textured natural-color radiance with a dense lattice of small shadows.

    ``sand_patch`` is ``(top, left, height, width)`` of a bright shadow-free
    region, or None.
    """
    by, bx = -(-height // block), -(-width // block)
    ids = rng.integers(0, len(PALETTE), size=(by, bx))
    colors = PALETTE[ids] * rng.uniform(0.85, 1.1, size=(by, bx, 1))
    base = np.repeat(np.repeat(colors, block, axis=0), block, axis=1)[:height, :width]
    grain = ndimage.gaussian_filter(rng.normal(size=(height, width)), 1.5)
    grain = 1.0 + 0.15 * grain / (grain.std() + 1e-12)
    img = np.clip(base * grain[..., None], 0.0, 1.0)
    # one 2x2 shadow per lattice cell, jittered inside the cell
    s = shadow_spacing
    for y0 in range(0, height, s):
        for x0 in range(0, width, s):
            y = y0 + int(rng.integers(0, max(1, s - 1)))
            x = x0 + int(rng.integers(0, max(1, s - 1)))
            img[y:y + 2, x:x + 2] = rng.uniform(0.0, 0.02)
    if sand_patch is not None:
        top, left, ph, pw = sand_patch
        tone = rng.uniform(0.82, 0.95)
        tint = np.array([1.0, 0.97, 0.88]) * tone
        patch = tint * (1.0 + 0.03 * rng.normal(size=(ph, pw, 1)))
        img[top:top + ph, left:left + pw] = np.clip(patch, 0.0, 1.0)[: height - top, : width - left]
    return img


@dataclass(frozen=True)
class SuiteScene:
    name: str
    kind: str
    scene: SceneSpec


def _sand_patch(rng, height, width):
    # bottom rows are the nearest part of every layout
    ph = int(rng.integers(height // 6, height // 4))
    pw = int(rng.integers(width // 7, width // 5))
    top = height - ph - int(rng.integers(2, 8))
    left = int(rng.integers(0, width - pw))
    return top, left, ph, pw


def make_scene(kind: str, rng: np.random.Generator, veiling: ChannelTriple,
               attenuation: ChannelTriple, size=(120, 160), sand: bool = True,
               psf: PsfParams | None = None) -> SceneSpec:
    height, width = size
    far = min(MAX_DEPTH, 3.3 / min(attenuation))
    if kind == "ramp":
        depth = ramp_depth(height, width, rng.uniform(1.0, 2.0), far, rng.uniform(0.15, 0.3))
    elif kind == "step":
        depth = np.minimum(
            step_depth(height, width, rng.uniform(1.5, 4.0), far, rng.uniform(0.55, 0.75)),
            ramp_depth(height, width, rng.uniform(1.0, 2.0), far, 0.6),
        )
    elif kind == "wall":
        depth = wall_depth(height, width, rng.uniform(2.0, 6.0), far, rng.uniform(0.12, 0.25))
    else:
        raise ValueError(f"unknown scene kind {kind!r}")
    patch = _sand_patch(rng, height, width) if sand else None
    radiance = seabed_radiance(height, width, rng, sand_patch=patch)
    return SceneSpec(radiance, depth, attenuation, veiling, psf or PsfParams())


def _uniform_triple(rng, lows, highs) -> ChannelTriple:
    return ChannelTriple.from_array(rng.uniform(lows, highs))


def scene_suite(water: str = "blue", count: int = 20, seed: int = 2018, size=(120, 160)):
    """Seeded list of SuiteScene with blue- or green-dominant veiling light.

    Blue water: B_inf ordered b > g > r, blue the least attenuated channel.
    Green water: B_inf dominated by green, green the least attenuated channel.
    Every scene has open water at depth >= 3 / min(c).
    """
    if water == "blue":
        b_lo, b_hi = (0.05, 0.40, 0.68), (0.25, 0.62, 0.90)
        c_lo, c_hi = (0.40, 0.08, 0.05), (0.80, 0.15, 0.08)
    elif water == "green":
        b_lo, b_hi = (0.05, 0.55, 0.20), (0.20, 0.80, 0.45)
        c_lo, c_hi = (0.40, 0.05, 0.10), (0.80, 0.08, 0.20)
    else:
        raise ValueError(f"water must be 'blue' or 'green', got {water!r}")
    rng = np.random.default_rng(seed)
    kinds = ("ramp", "step", "wall")
    suite = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        veiling = _uniform_triple(rng, b_lo, b_hi)
        attenuation = _uniform_triple(rng, c_lo, c_hi)
        scene = make_scene(kind, rng, veiling, attenuation, size)
        suite.append(SuiteScene(f"{water}-{i:02d}-{kind}", kind, scene))
    return suite
