import numpy as np
import pytest

from uwdehaze.formation import (
    PsfParams,
    SceneSpec,
    backscatter,
    direct_transmission,
    forward_scatter,
    gaussian_blur,
    synthesize,
    variable_blur,
)
from uwdehaze.imgcore import ChannelTriple, DimensionError, ParameterError

C = ChannelTriple(0.6, 0.1, 0.05)
B = ChannelTriple(0.2, 0.6, 0.8)
DIRECT_AT_5 = (0.049787068, 0.60653066, 0.77880078)
BACK_AT_5 = (0.19004259, 0.23608160, 0.17695938)


def test_direct_transmission_values(rng):
    img = rng.random((4, 5, 3))
    assert np.array_equal(direct_transmission(img, np.zeros((4, 5)), C), img)
    out = direct_transmission(np.ones((1, 1, 3)), np.full((1, 1), 5.0), C)
    assert np.allclose(out[0, 0], DIRECT_AT_5, atol=1e-8)


def test_red_vanishes_first():
    out = direct_transmission(np.ones((1, 3, 3)), np.array([[2.0, 8.0, 20.0]]), C)[0]
    assert np.all(out[:, 0] < out[:, 1]) and np.all(out[:, 1] < out[:, 2])
    assert out[2, 0] < 1e-5


def test_backscatter_values():
    assert np.array_equal(backscatter(B, np.zeros((2, 2)), C), np.zeros((2, 2, 3)))
    far = backscatter(B, np.full((1, 1), 1e6), C)
    assert np.allclose(far[0, 0], tuple(B))
    assert np.allclose(backscatter(B, np.full((1, 1), 5.0), C)[0, 0], BACK_AT_5, atol=1e-8)


def test_forward_scatter_contracts(rng):
    depth = np.full((12, 12), 3.0)
    direct = rng.random((12, 12, 3))
    assert np.array_equal(forward_scatter(direct, depth, PsfParams(0.0)), np.zeros_like(direct))
    const = np.full((12, 12, 3), 0.3)
    out = forward_scatter(const, depth, PsfParams(0.5, 0.1))
    assert np.allclose(out, 0.03)


def test_gaussian_blur_preserves_energy():
    img = np.zeros((41, 41))
    img[20, 20] = 1.0
    out = gaussian_blur(img, 2.0)
    assert abs(out.sum() - 1.0) < 0.01
    assert out.max() < 0.1


def test_variable_blur_levels(rng):
    img = rng.random((16, 16))
    assert np.array_equal(variable_blur(img, np.zeros((16, 16))), img)
    # pixels exactly at the top level receive the full-strength blur
    sig = np.full((16, 16), 1.5)
    assert np.allclose(variable_blur(img, sig), gaussian_blur(img, 1.5))


def test_synthesize_limits(rng):
    rad = rng.random((6, 8, 3))
    assert np.array_equal(synthesize(SceneSpec(rad, np.zeros((6, 8)), C, B)), rad)
    depth = rng.uniform(0, 30, (6, 8))
    pure = synthesize(SceneSpec(np.zeros((6, 8, 3)), depth, C, B))
    assert np.array_equal(pure, backscatter(B, depth, C))
    combined = synthesize(SceneSpec(np.ones((1, 1, 3)), np.full((1, 1), 5.0), C, B))
    assert np.allclose(combined[0, 0], np.add(DIRECT_AT_5, BACK_AT_5), atol=1e-8)


def test_hazy_approaches_veiling_with_depth(rng):
    rad = rng.random((1, 50, 3))
    depth = np.linspace(0, 80, 50)[None, :]
    hazy = synthesize(SceneSpec(rad, depth, C, B))
    assert np.abs(hazy[0, -1] - B.to_array()).max() < 0.02


def test_scene_spec_errors(rng):
    with pytest.raises(DimensionError):
        SceneSpec(rng.random((4, 4, 3)), np.zeros((4, 5)))
    with pytest.raises(ParameterError):
        SceneSpec(rng.random((4, 4, 3)), -np.ones((4, 4)))
    with pytest.raises(ParameterError):
        SceneSpec(rng.random((4, 4, 3)), np.ones((4, 4)), ChannelTriple(0.0, 0.1, 0.1))
    with pytest.raises(ParameterError):
        PsfParams(-1.0)
