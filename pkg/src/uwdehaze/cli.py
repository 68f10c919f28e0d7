"""Command-line front end: ``enhance``, ``synth``, ``compare`` and ``darkchannel``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfg
from . import imageio
from .darkchannel import PriorMode, dark_channel
from .formation import PsfParams, SceneSpec, synthesize
from .imgcore import ChannelTriple, ParameterError
from .metrics import dark_channel_mean, global_contrast, mae, rmse
from .pipeline import EnhancedResult, PipelineConfig, StageError, enhance_frame
from .scenes import MAX_DEPTH, ramp_depth, seabed_radiance, step_depth, wall_depth

REPORT_NAME = "report.json"
MANIFEST_NAME = "manifest.json"


class CliError(Exception):
    """A failure to report on stderr with a nonzero exit status."""


def _natural_key(path: Path):
    return [int(p) if p.isdigit() else p.lower() for p in re.split(r"(\d+)", path.name)]


def collect_inputs(paths) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = [p for p in path.iterdir() if p.suffix.lower() in imageio.COLOR_SUFFIXES]
            files.extend(sorted(found, key=_natural_key))
        elif path.exists():
            files.append(path)
        else:
            raise CliError(f"input not found: {path}")
    if not files:
        raise CliError("no input images found")
    return files


def resolve_config(args, base: PipelineConfig | None = None) -> PipelineConfig:
    pairs = cfg.read_pairs(args.config) if args.config else {}
    overrides = {
        "prior": args.prior,
        "window_radius": args.window_radius,
        "omega": args.omega,
        "t0": args.t0,
    }
    pairs.update({k: str(v) for k, v in overrides.items() if v is not None})
    if args.no_whitebalance:
        pairs["use_whitebalance"] = "false"
    return cfg.pipeline_config(pairs, base)


def _triple_report(t: ChannelTriple) -> dict:
    return {"normalized": [round(v, 6) for v in t], "8bit": list(t.to_8bit())}


def _frame_report(src: Path, dst: Path, image, result: EnhancedResult, radius: int) -> dict:
    return {
        "input": str(src),
        "output": str(dst),
        "airlight": _triple_report(result.airlight),
        "gain": round(result.gain, 6),
        "timings_ms": {k: round(v * 1000, 3) for k, v in result.timings.items()},
        "metrics": {
            "dark_channel_mean_in": dark_channel_mean(image, radius),
            "dark_channel_mean_out": dark_channel_mean(result.output, radius),
            "contrast_in": global_contrast(image),
            "contrast_out": global_contrast(result.output),
        },
    }


def _write_dumps(out: Path, stem: str, result: EnhancedResult) -> list[str]:
    written = {
        f"{stem}_dark.png": result.dark,
        f"{stem}_transmission_raw.png": result.raw_transmission,
        f"{stem}_transmission.png": result.transmission.values,
    }
    for name, gray in written.items():
        imageio.write_gray(out / name, gray)
    return sorted(written)


def cmd_enhance(args) -> int:
    config = resolve_config(args)
    files = collect_inputs(args.inputs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def process(src: Path):
        image = imageio.read_image(src)
        result = enhance_frame(image, config)
        dst = out / f"{src.stem}.png"
        imageio.write_image(dst, result.output)
        entry = _frame_report(src, dst, image, result, config.window_radius)
        if args.dump_intermediates:
            entry["intermediates"] = _write_dumps(out, src.stem, result)
        return entry

    def guarded(src: Path):
        try:
            return process(src)
        except StageError as exc:
            return {"input": str(src), "error": str(exc), "stage": exc.stage}
        except (OSError, ValueError) as exc:
            return {"input": str(src), "error": str(exc), "stage": None}

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        entries = list(pool.map(guarded, files))
    failures = [e for e in entries if "error" in e]
    report = {
        "command": "enhance",
        "config": cfg.pipeline_to_pairs(config),
        "frames": entries,
        "failed": len(failures),
    }
    (out / REPORT_NAME).write_text(json.dumps(report, indent=2))
    for e in failures:
        where = f" (stage {e['stage']})" if e["stage"] else ""
        print(f"error: {e['input']}{where}: {e['error']}", file=sys.stderr)
    return 1 if failures else 0


def build_scene(settings: dict[str, str], base_dir: Path) -> SceneSpec:
    """SceneSpec from resolved scene settings (see ``config.SCENE_DEFAULTS``)."""
    def get(key, conv):
        try:
            return conv(settings[key])
        except (ValueError, TypeError) as exc:
            raise cfg.ConfigError(key, str(exc)) from None

    attenuation = get("attenuation", cfg.parse_triple)
    veiling = get("veiling", cfg.parse_triple)
    rng = np.random.default_rng(get("seed", int))
    if settings["depth_file"]:
        depth = imageio.read_depth(base_dir / settings["depth_file"])
        height, width = depth.shape
    else:
        width, height = get("width", int), get("height", int)
        if width <= 0 or height <= 0:
            raise cfg.ConfigError("width", "scene dimensions must be positive")
        near = get("near", float)
        far_raw = settings["far"].strip().lower()
        far = min(MAX_DEPTH, 3.3 / min(attenuation)) if far_raw == "auto" else get("far", float)
        split = get("split", float)
        layout = settings["layout"]
        if layout == "ramp":
            depth = ramp_depth(height, width, near, far, split)
        elif layout == "step":
            depth = step_depth(height, width, near, far, split)
        elif layout == "wall":
            depth = wall_depth(height, width, near, far, split)
        elif layout == "constant":
            depth = np.full((height, width), near)
        else:
            raise cfg.ConfigError("layout", f"expected ramp, step, wall or constant, got {layout!r}")
    if settings["radiance_file"]:
        radiance = imageio.read_image(base_dir / settings["radiance_file"])
    elif settings["radiance"] == "texture":
        patch = None
        if get("sand", cfg.parse_bool):
            ph, pw = max(1, height // 5), max(1, width // 6)
            patch = (max(0, height - ph - 4), (width - pw) // 2, ph, pw)
        radiance = seabed_radiance(height, width, rng, sand_patch=patch)
    elif settings["radiance"].startswith("constant:"):
        color = get("radiance", lambda s: cfg.parse_triple(s.split(":", 1)[1]))
        radiance = np.broadcast_to(color.to_array(), (height, width, 3)).copy()
    else:
        raise cfg.ConfigError("radiance", "expected texture or constant:r,g,b")
    psf = PsfParams(get("blur_scale", float), get("forward_weight", float))
    try:
        return SceneSpec(radiance, depth, attenuation, veiling, psf)
    except ParameterError as exc:
        raise cfg.ConfigError("scene", str(exc)) from None


def cmd_synth(args) -> int:
    scene_path = Path(args.scene)
    settings = cfg.scene_settings(cfg.read_pairs(scene_path))
    scene = build_scene(settings, scene_path.parent)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    hazy = synthesize(scene)
    imageio.write_image(out / "hazy.png", hazy)
    imageio.write_image(out / "radiance.png", scene.radiance)
    imageio.write_depth(out / "depth.png", scene.depth)
    trans = scene.transmission()
    names = {}
    for k, ch in enumerate("rgb"):
        names[ch] = f"transmission_{ch}.png"
        imageio.write_gray(out / names[ch], trans[..., k], bits=16)
    manifest = {
        "hazy": "hazy.png",
        "radiance": "radiance.png",
        "depth": "depth.png",
        "depth_scale": imageio.DEPTH_SCALE,
        "transmission": names,
        "transmission_scale": 65535,
        "veiling": list(scene.veiling),
        "attenuation": list(scene.attenuation),
        "psf": {"blur_scale": scene.psf.blur_scale, "forward_weight": scene.psf.weight},
        "scene": settings,
    }
    (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2))
    print(f"wrote synthetic scene to {out}")
    return 0


def load_compare_input(path) -> tuple[np.ndarray, dict | None]:
    """Hazy image plus optional ground truth from a synth manifest."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    if path.suffix.lower() != ".json":
        return imageio.read_image(path), None
    try:
        manifest = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read manifest {path}: {exc}") from exc
    base = path.parent
    hazy = imageio.read_image(base / manifest["hazy"])
    truth = {"veiling": ChannelTriple(*manifest["veiling"]),
             "attenuation": ChannelTriple(*manifest["attenuation"])}
    if manifest.get("radiance"):
        truth["radiance"] = imageio.read_image(base / manifest["radiance"])
    if manifest.get("depth"):
        truth["depth"] = imageio.read_gray16(base / manifest["depth"]) / manifest.get(
            "depth_scale", imageio.DEPTH_SCALE)
    return hazy, truth


def compare_row(method: PriorMode, hazy, result: EnhancedResult, truth: dict | None,
                radius: int) -> dict:
    row = {
        "method": method.value,
        "airlight": [round(v, 6) for v in result.airlight],
        "airlight_8bit": list(result.airlight.to_8bit()),
        "dark_channel_mean": dark_channel_mean(result.output, radius),
        "contrast": global_contrast(result.output),
        "airlight_error": None,
        "rmse": None,
        "t_mae": None,
    }
    if truth:
        row["airlight_error"] = result.airlight.max_abs_diff(truth["veiling"])
        if "radiance" in truth:
            row["rmse"] = rmse(result.output, truth["radiance"])
        if "depth" in truth:
            t_true = np.exp(-min(truth["attenuation"]) * truth["depth"])
            row["t_mae"] = mae(result.refined_transmission, t_true)
    return row


def format_table(rows: list[dict]) -> str:
    cols = ["method", "airlight_8bit", "airlight_error", "dark_channel_mean", "contrast",
            "rmse", "t_mae"]

    def cell(v):
        if v is None:
            return "-"
        if isinstance(v, float):
            return f"{v:.4f}"
        if isinstance(v, list):
            return ",".join(str(x) for x in v)
        return str(v)

    table = [cols] + [[cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(line, widths)) for line in table)


def cmd_compare(args) -> int:
    config = resolve_config(args, PipelineConfig(use_whitebalance=False))
    try:
        methods = [PriorMode.parse(m) for m in args.methods.split(",") if m.strip()]
    except ParameterError as exc:
        raise CliError(str(exc)) from exc
    hazy, truth = load_compare_input(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def run(method: PriorMode):
        return method, enhance_frame(hazy, config.with_(prior=method))

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(run, methods))
    rows = [compare_row(m, hazy, r, truth, config.window_radius) for m, r in results]
    strip = np.concatenate([hazy] + [r.output for _, r in results], axis=1)
    imageio.write_image(out / "compare.png", strip)
    for method, result in results:
        imageio.write_image(out / f"enhanced_{method.value}.png", result.output)
        if args.dump_intermediates:
            _write_dumps(out, method.value, result)
    report = {
        "command": "compare",
        "input": str(args.input),
        "config": cfg.pipeline_to_pairs(config),
        "panels": ["hazy"] + [m.value for m in methods],
        "ground_truth": truth is not None,
        "rows": rows,
    }
    (out / "compare.json").write_text(json.dumps(report, indent=2))
    print(format_table(rows))
    return 0


def cmd_darkchannel(args) -> int:
    config = resolve_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for src in collect_inputs(args.inputs):
        dark = dark_channel(imageio.read_image(src), config.window_radius, config.prior)
        imageio.write_gray(out / f"{src.stem}_dark_{config.prior.value}.png", dark)
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH", help="key = value pipeline config file")
    shared.add_argument("--prior", choices=[m.value for m in PriorMode])
    shared.add_argument("--no-whitebalance", action="store_true",
                        help="skip the white-balance stage")
    shared.add_argument("--window-radius", type=int, metavar="N")
    shared.add_argument("--omega", type=float, metavar="X")
    shared.add_argument("--t0", type=float, metavar="X")
    shared.add_argument("--dump-intermediates", action="store_true",
                        help="also write dark channel and transmission images")
    shared.add_argument("--out", required=True, metavar="DIR", help="output directory")
    shared.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")

    parser = argparse.ArgumentParser(prog="uwdehaze", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", parents=[shared], help="dehaze images or frame directories")
    p.add_argument("inputs", nargs="+", metavar="INPUT")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("synth", parents=[shared], help="render a synthetic hazy scene")
    p.add_argument("scene", metavar="SCENE", help="key = value scene file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", parents=[shared], help="run several priors side by side")
    p.add_argument("input", metavar="INPUT", help="image, synth manifest or synth directory")
    p.add_argument("--methods", default="classic,udcp,rdcp,shifted")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("darkchannel", parents=[shared], help="write dark channel images")
    p.add_argument("inputs", nargs="+", metavar="INPUT")
    p.set_defaults(func=cmd_darkchannel)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
