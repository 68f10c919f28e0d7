import numpy as np
import pytest

from uwdehaze.imgcore import (
    ChannelTriple,
    DimensionError,
    ParameterError,
    as_image,
    from_8bit,
    gray_to_16bit,
    luminance,
    to_8bit,
)


def test_from_8bit_endpoints_and_division():
    px = np.array([[[255, 255, 255], [0, 0, 0], [51, 102, 204]]], dtype=np.uint8)
    out = from_8bit(px)
    assert np.array_equal(out[0, 0], [1.0, 1.0, 1.0])
    assert np.array_equal(out[0, 1], [0.0, 0.0, 0.0])
    assert np.allclose(out[0, 2], [0.2, 0.4, 0.8], atol=1e-15)


def test_to_8bit_rounds_half_up_after_clamping():
    img = np.array([[[1.0, 1.0, 1.0], [0.5, 0.5, 0.5], [-0.1, 1.2, 0.3]]])
    assert to_8bit(img).tolist() == [[[255, 255, 255], [128, 128, 128], [0, 255, 77]]]
    assert to_8bit(img).dtype == np.uint8


def test_8bit_round_trip_is_exact(rng):
    px = rng.integers(0, 256, size=(7, 9, 3), dtype=np.uint8)
    assert np.array_equal(to_8bit(from_8bit(px)), px)


def test_zero_dimension_raster_rejected():
    with pytest.raises(DimensionError):
        as_image(np.zeros((0, 4, 3)))
    with pytest.raises(DimensionError):
        from_8bit(np.zeros((3, 0, 3), dtype=np.uint8))
    with pytest.raises(DimensionError):
        as_image(np.zeros((4, 4)))


def test_channel_triple_validation():
    t = ChannelTriple(0.1, 0.5, 0.9)
    assert tuple(t) == (0.1, 0.5, 0.9)
    assert t.to_8bit() == (26, 128, 230)
    assert t.max_abs_diff(ChannelTriple(0.1, 0.4, 1.0)) == pytest.approx(0.1)
    with pytest.raises(ParameterError):
        ChannelTriple(-0.1, 0.0, 0.0)
    with pytest.raises(ParameterError):
        ChannelTriple(float("nan"), 0.0, 0.0)


def test_luminance_weights():
    img = np.zeros((1, 3, 3))
    img[0, 0, 0] = img[0, 1, 1] = img[0, 2, 2] = 1.0
    assert np.allclose(luminance(img), [[0.299, 0.587, 0.114]])


def test_gray_to_16bit_endpoints():
    assert gray_to_16bit(np.array([[0.0, 1.0, 0.5]])).tolist() == [[0, 65535, 32768]]
