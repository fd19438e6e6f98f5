"""Synthetic matting scenes: smooth colour ramps composited through soft-edged shapes."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import BACKGROUND, FOREGROUND, UNKNOWN


@dataclass(frozen=True)
class Scene:
    image: np.ndarray
    trimap: np.ndarray
    alpha_true: np.ndarray
    alpha0: np.ndarray
    confidence: np.ndarray


def _ramp(rng, h, w):
    yy, xx = np.mgrid[0:h, 0:w] / max(h, w)
    base = rng.uniform(0.15, 0.85, 3)
    gy, gx = rng.uniform(-0.3, 0.3, (2, 3))
    out = base + yy[..., None] * gy + xx[..., None] * gx
    return np.clip(out, 0.0, 1.0)


def _soft_shape(rng, h, w, edge):
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    cy, cx = rng.uniform(0.35, 0.65, 2) * (h, w)
    ry, rx = rng.uniform(0.18, 0.3, 2) * (h, w)
    theta = rng.uniform(0, np.pi)
    dy, dx = yy - cy, xx - cx
    u = (dy * np.cos(theta) + dx * np.sin(theta)) / ry
    v = (-dy * np.sin(theta) + dx * np.cos(theta)) / rx
    # signed distance proxy in pixels, wobbled so the edge is not a plain ellipse
    ang = np.arctan2(v, u)
    wobble = 1.0 + 0.12 * np.sin(rng.integers(2, 6) * ang + rng.uniform(0, 2 * np.pi))
    dist = (np.sqrt(u ** 2 + v ** 2) - wobble) * min(ry, rx)
    return 1.0 / (1.0 + np.exp(dist / edge))


def make_scene(seed, size=64, edge=None, band=None, sample_conf=1.0, sample_noise=0.05):
    """One scene with trimap, noisy initial matte and confidence.

    The unknown band covers pixels with alpha in (0.02, 0.98) dilated by ``band``
    pixels. Edge width and band default to 1.5 and 3 pixels at 64x64 and scale
    with ``size``. ``alpha0`` mimics a sampling front-end: ground truth plus
    Gaussian noise, with confidence ``sample_conf`` inside the unknown band.
    """
    if edge is None:
        edge = 1.5 * size / 64
    if band is None:
        band = max(1, round(3 * size / 64))
    rng = np.random.default_rng(seed)
    h = w = size
    fg, bg = _ramp(rng, h, w), _ramp(rng, h, w)
    # keep foreground and background colours apart
    while np.abs(fg - bg).sum(axis=2).min() < 0.3:
        fg, bg = _ramp(rng, h, w), _ramp(rng, h, w)
    alpha = _soft_shape(rng, h, w, edge)
    image = alpha[..., None] * fg + (1 - alpha[..., None]) * bg

    mixed = (alpha > 0.02) & (alpha < 0.98)
    unknown = ndimage.binary_dilation(mixed, iterations=band)
    trimap = np.where(alpha >= 0.5, FOREGROUND, BACKGROUND).astype(np.int8)
    trimap[unknown] = UNKNOWN

    alpha0 = np.clip(alpha + rng.normal(0, sample_noise, alpha.shape), 0, 1)
    confidence = np.where(unknown, sample_conf, 0.0)
    return Scene(image, trimap, alpha, alpha0, confidence)


def make_suite(n=20, size=64, seed=0, **kwargs):
    return [make_scene(seed + i, size=size, **kwargs) for i in range(n)]
