"""Flat ``key = value`` configuration files for pipelines and synthetic scenes.

Blank lines and ``#`` comments are ignored. Every field is addressable by a
dotted key (``refine.radius``, ``wb.strength``); unknown keys are errors.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .darkchannel import PriorMode
from .imgcore import ChannelTriple, ParameterError
from .pipeline import Brightening, PipelineConfig
from .transmission import RefineParams
from .whitebalance import WbParams


class ConfigError(ParameterError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


def parse_bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def parse_triple(text: str) -> ChannelTriple:
    parts = [p for p in str(text).replace(",", " ").split()]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    return ChannelTriple(*(float(p) for p in parts))


def _optional_int(text: str):
    return None if str(text).strip().lower() in ("auto", "none", "") else int(text)


def read_pairs(path) -> dict[str, str]:
    """Read a key = value file into an ordered dict of raw strings."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key] = value
    return pairs


PIPELINE_KEYS = {
    "prior": PriorMode.parse,
    "window_radius": int,
    "omega": float,
    "t0": float,
    "top_fraction": float,
    "use_whitebalance": parse_bool,
    "brighten": Brightening.parse,
    "refine.radius": int,
    "refine.spatial_sigma": float,
    "refine.range_sigma": float,
    "refine.separable": parse_bool,
    "wb.patch_radius": _optional_int,
    "wb.strength": float,
}


def pipeline_config(pairs: dict[str, str] | None = None,
                    base: PipelineConfig | None = None) -> PipelineConfig:
    """Build a PipelineConfig from raw pairs layered over ``base``."""
    top: dict = {}
    refine: dict = {}
    wb: dict = {}
    for key, raw in (pairs or {}).items():
        if key not in PIPELINE_KEYS:
            raise ConfigError(key, "unknown key")
        try:
            value = PIPELINE_KEYS[key](raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(key, str(exc)) from None
        group, _, name = key.rpartition(".")
        {"": top, "refine": refine, "wb": wb}[group][name] = value
    base = base or PipelineConfig()
    try:
        return replace(base, refine=replace(base.refine, **refine), wb=replace(base.wb, **wb),
                       **top)
    except ParameterError as exc:
        key = next(iter({**top, **refine, **wb}), "?")
        raise ConfigError(key, str(exc)) from None


def pipeline_to_pairs(config: PipelineConfig) -> dict[str, object]:
    """Fully resolved, flat view of ``config`` (used in run reports)."""
    return {
        "prior": config.prior.value,
        "window_radius": config.window_radius,
        "omega": config.omega,
        "t0": config.t0,
        "top_fraction": config.top_fraction,
        "use_whitebalance": config.use_whitebalance,
        "brighten": str(config.brighten),
        "refine.radius": config.refine.radius,
        "refine.spatial_sigma": config.refine.spatial_sigma,
        "refine.range_sigma": config.refine.range_sigma,
        "refine.separable": config.refine.separable,
        "wb.patch_radius": "auto" if config.wb.patch_radius is None else config.wb.patch_radius,
        "wb.strength": config.wb.strength,
    }


SCENE_DEFAULTS = {
    "width": "160",
    "height": "120",
    "layout": "ramp",
    "near": "1.5",
    "far": "auto",
    "split": "0.25",
    "radiance": "texture",
    "radiance_file": "",
    "depth_file": "",
    "sand": "true",
    "seed": "0",
    "attenuation": "0.6, 0.1, 0.05",
    "veiling": "0.2, 0.6, 0.8",
    "blur_scale": "0",
    "forward_weight": "0.1",
}


def scene_settings(pairs: dict[str, str]) -> dict[str, str]:
    unknown = set(pairs) - set(SCENE_DEFAULTS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    return {**SCENE_DEFAULTS, **pairs}
