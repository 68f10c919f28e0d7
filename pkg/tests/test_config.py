import pytest

from uwdehaze.config import (
    ConfigError,
    pipeline_config,
    pipeline_to_pairs,
    read_pairs,
    scene_settings,
)
from uwdehaze.darkchannel import PriorMode
from uwdehaze.imgcore import ParameterError
from uwdehaze.pipeline import PipelineConfig


def test_read_pairs_ignores_comments(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# header\nprior = udcp  # inline\n\nrefine.radius=4\n")
    assert read_pairs(path) == {"prior": "udcp", "refine.radius": "4"}


def test_read_pairs_rejects_garbage(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("prior udcp\n")
    with pytest.raises(ParameterError, match="bad.cfg:1"):
        read_pairs(path)


def test_every_field_addressable():
    cfg = pipeline_config({
        "prior": "rdcp", "window_radius": "3", "omega": "0.9", "t0": "0.2",
        "top_fraction": "0.01", "use_whitebalance": "off", "brighten": "1.2,1.1",
        "refine.radius": "5", "refine.spatial_sigma": "3", "refine.range_sigma": "0.2",
        "refine.separable": "no", "wb.patch_radius": "6", "wb.strength": "0.5",
    })
    assert cfg.prior is PriorMode.RED_COMPLEMENT
    assert (cfg.window_radius, cfg.omega, cfg.t0, cfg.top_fraction) == (3, 0.9, 0.2, 0.01)
    assert not cfg.use_whitebalance and cfg.brighten.gain == 1.2
    assert (cfg.refine.radius, cfg.refine.separable, cfg.wb.patch_radius) == (5, False, 6)
    assert pipeline_config(pipeline_to_pairs_str(cfg)) == cfg


def pipeline_to_pairs_str(cfg):
    return {k: str(v) for k, v in pipeline_to_pairs(cfg).items()}


def test_defaults_round_trip():
    assert pipeline_config(pipeline_to_pairs_str(PipelineConfig())) == PipelineConfig()


def test_errors_name_the_key():
    with pytest.raises(ConfigError) as info:
        pipeline_config({"bogus": "1"})
    assert info.value.key == "bogus"
    with pytest.raises(ConfigError) as info:
        pipeline_config({"omega": "lots"})
    assert info.value.key == "omega"
    with pytest.raises(ConfigError) as info:
        pipeline_config({"t0": "2"})
    assert info.value.key == "t0"
    with pytest.raises(ConfigError, match="refine.radius"):
        pipeline_config({"refine.radius": "x"})


def test_base_is_respected():
    cfg = pipeline_config({"omega": "0.8"}, PipelineConfig(use_whitebalance=False))
    assert cfg.omega == 0.8 and not cfg.use_whitebalance


def test_scene_settings():
    s = scene_settings({"layout": "wall"})
    assert s["layout"] == "wall" and s["far"] == "auto"
    with pytest.raises(ConfigError):
        scene_settings({"colour": "red"})
