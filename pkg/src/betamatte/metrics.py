"""Matte comparison metrics: MAD, SAD and SSIM.

Inputs are clamped to [0, 1] first, since the metrics describe exported mattes.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import DimensionError

SSIM_SIGMA = 1.5
SSIM_WIN = 11
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass(frozen=True)
class MatteMetrics:
    ssim: float
    mad: float
    sad: float


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"alpha maps differ in shape: {a.shape} vs {b.shape}")
    return np.clip(a, 0.0, 1.0), np.clip(b, 0.0, 1.0)


def mad(a, b):
    a, b = _pair(a, b)
    return float(np.mean(np.abs(a - b)))


def sad(a, b, normalized=True):
    """Sum of absolute differences, divided by the pixel count unless ``normalized=False``."""
    a, b = _pair(a, b)
    total = float(np.sum(np.abs(a - b)))
    return total / a.size if normalized else total


def _gaussian_window():
    r = SSIM_WIN // 2
    g = np.exp(-0.5 * (np.arange(-r, r + 1) / SSIM_SIGMA) ** 2)
    g /= g.sum()
    return g


def _valid_filter(x, g):
    # separable correlation keeping only positions where the window fits
    r = len(g) // 2
    out = ndimage.correlate1d(x, g, axis=0, mode="constant")
    out = ndimage.correlate1d(out, g, axis=1, mode="constant")
    return out[r:-r, r:-r]


def ssim(a, b):
    """Mean SSIM with an 11x11 Gaussian window (sigma 1.5), data range 1."""
    a, b = _pair(a, b)
    if a.ndim != 2 or min(a.shape) < SSIM_WIN:
        raise ValueError(f"SSIM needs 2-D maps of at least {SSIM_WIN}x{SSIM_WIN}")
    g = _gaussian_window()
    mu_a, mu_b = _valid_filter(a, g), _valid_filter(b, g)
    var_a = _valid_filter(a * a, g) - mu_a ** 2
    var_b = _valid_filter(b * b, g) - mu_b ** 2
    cov = _valid_filter(a * b, g) - mu_a * mu_b
    c1, c2 = SSIM_K1 ** 2, SSIM_K2 ** 2
    s = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2))
    return float(s.mean())


def compare(a, b):
    return MatteMetrics(ssim=ssim(a, b), mad=mad(a, b), sad=sad(a, b))
