import numpy as np
import pytest

from betamatte.closed_form import assemble_cf_laplacian, solve_cf
from betamatte.core import BACKGROUND, FOREGROUND, UNKNOWN
from betamatte.sparse import SingularSystemError

from conftest import random_trimap
from oracles import cf_window_regression_energy


def test_ones_in_null_space(rng):
    lap = assemble_cf_laplacian(rng.random((7, 8, 3)))
    assert np.max(np.abs(lap @ np.ones(56))) < 1e-12
    assert abs(lap - lap.T).max() < 1e-12


def test_constant_image_single_window():
    img = np.full((3, 3, 3), 0.4)
    lap = assemble_cf_laplacian(img, radius=1, eps=1e-7).toarray()
    # the centre pixel's row only collects the full window's contributions once;
    # check the full-window term via an image with exactly one 3x3 window plus crops
    # by recomputing that term alone
    full = np.eye(9) - 1.0 / 9
    # pixel pair (0, 8) only co-occurs in the centre window
    assert np.isclose(lap[0, 8], full[0, 8], atol=1e-9)
    assert np.isclose(lap[2, 6], full[2, 6], atol=1e-9)


def test_quadratic_form_matches_window_regression(rng):
    img = rng.random((5, 5, 3))
    eps = 1e-3
    lap = assemble_cf_laplacian(img, 1, eps)
    for _ in range(5):
        alpha = rng.random(25)
        ref = cf_window_regression_energy(img, alpha.reshape(5, 5), 1, eps)
        assert abs(alpha @ lap @ alpha - ref) < 1e-8 * max(1.0, ref)


def test_psd(rng):
    lap = assemble_cf_laplacian(rng.random((8, 8, 3)))
    for _ in range(100):
        a = rng.normal(size=64)
        assert a @ lap @ a >= -1e-9


def test_degenerate_image():
    with pytest.raises(ValueError):
        assemble_cf_laplacian(np.zeros((1, 1, 3)))


def test_all_known_reproduces_trimap(rng):
    trimap = np.full((6, 6), BACKGROUND)
    trimap[1:4, 2:5] = FOREGROUND
    img = np.where((trimap == FOREGROUND)[..., None], [0.9, 0.2, 0.1], [0.1, 0.3, 0.8])
    alpha = solve_cf(img, trimap)
    assert np.max(np.abs(alpha - (trimap == FOREGROUND))) < 1e-3


def test_constant_image_two_anchors_bounded():
    img = np.full((8, 8, 3), 0.5)
    trimap = np.full((8, 8), UNKNOWN)
    trimap[0, 0], trimap[-1, -1] = BACKGROUND, FOREGROUND
    alpha = solve_cf(img, trimap, method="dense")
    assert alpha.min() >= -0.01 and alpha.max() <= 1.01
    assert np.max(np.abs(np.diff(alpha, axis=1))) < 0.5


def test_cg_matches_dense(rng):
    img = rng.random((8, 8, 3))
    trimap = random_trimap(rng, 8, 8)
    cg = solve_cf(img, trimap, tol=1e-13)
    direct = solve_cf(img, trimap, method="dense")
    assert np.max(np.abs(cg - direct)) < 1e-6


def test_no_anchor_is_singular():
    with pytest.raises(SingularSystemError):
        solve_cf(np.zeros((4, 4, 3)), np.full((4, 4), UNKNOWN))
