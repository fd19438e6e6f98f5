import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from betamatte.core import BACKGROUND, FOREGROUND, UNKNOWN, reconstruct_alpha
from betamatte.metrics import mad
from betamatte.multiscale import (MattingConfig, PyramidLevel, downsample, matte_multiscale,
                                  solve_beta, upsample_beta)
from betamatte.sparse import SingularSystemError


def _level(img, trimap=None):
    if trimap is None:
        trimap = np.full(img.shape[:2], UNKNOWN)
    return PyramidLevel(img, trimap)


def test_downsample_constant():
    img = np.full((8, 6, 3), 0.3)
    out = downsample(_level(img), 2)
    assert out.image.shape == (4, 3, 3) and np.allclose(out.image, 0.3)
    assert out.scale_divisor == 2


def test_downsample_odd_size_is_ceil(rng):
    out = downsample(_level(rng.random((9, 7, 3))), 2)
    assert out.image.shape == (5, 4, 3)


def test_conservative_trimap():
    trimap = np.array([[FOREGROUND, FOREGROUND, BACKGROUND, BACKGROUND],
                       [FOREGROUND, UNKNOWN, BACKGROUND, BACKGROUND],
                       [FOREGROUND, FOREGROUND, FOREGROUND, BACKGROUND],
                       [FOREGROUND, FOREGROUND, BACKGROUND, BACKGROUND]])
    out = downsample(_level(np.zeros((4, 4, 3)), trimap), 2)
    assert out.trimap.tolist() == [[UNKNOWN, BACKGROUND], [FOREGROUND, UNKNOWN]]


def test_downsample_composition(rng):
    level = PyramidLevel(rng.random((16, 12, 3)), np.full((16, 12), UNKNOWN),
                         rng.random((16, 12)), rng.random((16, 12)) * 5)
    twice = downsample(downsample(level, 2), 2)
    once = downsample(level, 4)
    assert np.max(np.abs(twice.image - once.image)) < 1e-12
    assert np.max(np.abs(twice.alpha0 - once.alpha0)) < 1e-12
    assert once.confidence.min() >= 0


def test_downsample_errors(rng):
    with pytest.raises(ValueError):
        downsample(_level(rng.random((8, 8, 3))), 3)
    with pytest.raises(ValueError):
        downsample(_level(rng.random((4, 8, 3))), 4)


def test_upsample_constant_and_identity(rng):
    const = np.tile(rng.normal(size=4), (3, 5, 1))
    assert np.allclose(upsample_beta(const, 13, 7), const[0, 0], atol=1e-12)
    field = rng.normal(size=(6, 5, 4))
    assert np.max(np.abs(upsample_beta(field, 5, 6) - field)) < 1e-12


def test_upsample_linear_ramp():
    h, w = 6, 8
    yy, xx = np.mgrid[0:h, 0:w]
    coarse = np.stack([xx, yy, 2 * xx - yy, np.ones((h, w))], axis=2).astype(float)
    up = upsample_beta(coarse, 2 * w, 2 * h)
    # fine pixel centre (v + 0.5) / 2 - 0.5 in coarse coordinates
    fy, fx = (np.mgrid[0:2 * h, 0:2 * w] + 0.5) / 2 - 0.5
    expected = np.stack([fx, fy, 2 * fx - fy, np.ones_like(fx)], axis=2)
    assert np.max(np.abs(up - expected)) < 1e-6


fields = arrays(np.float64, (3, 4, 4), elements=st.floats(-5, 5))


@settings(max_examples=40, deadline=None)
@given(fields, st.permutations(range(4)), st.floats(-3, 3))
def test_upsample_commutes_with_permutation_and_offsets(field, perm, c):
    up = upsample_beta(field, 9, 7)
    assert np.allclose(upsample_beta(field[..., perm], 9, 7), up[..., perm])
    assert np.allclose(upsample_beta(field + c, 9, 7), up + c, atol=1e-9)


def test_bias_offset_passes_through_reconstruction(rng):
    img = rng.random((8, 8, 3))
    coarse = rng.normal(size=(4, 4, 4))
    shifted = coarse + np.array([0, 0, 0, 0.7])
    a = reconstruct_alpha(img, upsample_beta(coarse, 8, 8))
    b = reconstruct_alpha(img, upsample_beta(shifted, 8, 8))
    assert np.allclose(b - 0.7, a)


def _corner_scene():
    img = np.full((16, 16, 3), 0.5)
    trimap = np.full((16, 16), UNKNOWN)
    trimap[:2, :2] = BACKGROUND
    trimap[-2:, -2:] = FOREGROUND
    return PyramidLevel(img, trimap)


def test_factor_one_is_single_scale(rng):
    img = rng.random((10, 10, 3))
    trimap = np.full((10, 10), UNKNOWN)
    trimap[:, 0], trimap[:, -1] = BACKGROUND, FOREGROUND
    beta, alpha = matte_multiscale(PyramidLevel(img, trimap), 1)
    ref = solve_beta(img, trimap)
    assert np.array_equal(beta, ref)
    assert np.array_equal(alpha, reconstruct_alpha(img, ref))


def test_constant_image_scales_agree():
    level = _corner_scene()
    _, a1 = matte_multiscale(level, 1)
    _, a2 = matte_multiscale(level, 2)
    assert a2.shape == a1.shape
    assert mad(a1, a2) <= 0.02


def test_all_unknown_is_rejected():
    with pytest.raises(SingularSystemError):
        solve_beta(np.zeros((4, 4, 3)), np.full((4, 4), UNKNOWN))


def test_bad_factor():
    with pytest.raises(ValueError):
        matte_multiscale(_corner_scene(), 3)
