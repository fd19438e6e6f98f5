"""Matting Laplacian over the colour-filter field beta.

Two assemblies are provided and kept independent of each other:

* ``assemble_five_point``: couples each pixel to its 4 axis neighbours with
  off-diagonal blocks ``-(M_i + M_k) / 2``.
* ``assemble_general``: square windows of a given radius. Pixel j sees the
  set S_j of window centres whose window contains it; every ordered pair
  (i, k) of distinct centres in S_j picks up ``-M_j / |S_j|``.

In both cases the diagonal block is minus the sum of the off-diagonal blocks
of its row, so any constant beta field lies in the null space.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .core import augment
from .sparse import BlockSparseMatrix


@dataclass(frozen=True)
class Isotropic:
    """Replace X X^T by X X^T + eps_s I."""

    eps_s: float = 1e-4


@dataclass(frozen=True)
class SmoothedMoments:
    """Gaussian-blur X X^T over the image plane, then add eps_s I."""

    sigma_s: float = 1.0
    eps_s: float = 1e-4

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise ValueError("sigma_s must be positive")


@dataclass(frozen=True)
class StencilConfig:
    mode: str = "five_point"  # or "window"
    radius: int = 1
    spatial_prior: object = field(default_factory=Isotropic)

    def __post_init__(self):
        if self.mode not in ("five_point", "window"):
            raise ValueError(f"unknown stencil mode {self.mode!r}")
        if self.mode == "window" and self.radius < 1:
            raise ValueError("window radius must be >= 1")


def moments(image, prior=None):
    """Per-pixel second moment M_i, shape (H, W, 4, 4).

    ``prior`` is None (plain X X^T), an ``Isotropic`` or a ``SmoothedMoments``.
    """
    x = augment(image)
    m = x[..., :, None] * x[..., None, :]
    if prior is None:
        return m
    if isinstance(prior, SmoothedMoments):
        # truncate 3 sigma, normalised kernel, half-sample symmetric borders
        m = ndimage.gaussian_filter(
            m, sigma=(prior.sigma_s, prior.sigma_s, 0, 0), mode="reflect", truncate=3.0)
        m = 0.5 * (m + np.swapaxes(m, -1, -2))
    elif not isinstance(prior, Isotropic):
        raise TypeError(f"unsupported spatial prior {prior!r}")
    if prior.eps_s < 0:
        raise ValueError("eps_s must be nonnegative")
    return m + prior.eps_s * np.eye(4)


def _with_diagonal(n, rows, cols, blocks):
    diag = np.zeros((n, 4, 4))
    np.add.at(diag, rows, blocks)
    idx = np.arange(n)
    return BlockSparseMatrix(
        n,
        np.concatenate([rows, idx]),
        np.concatenate([cols, idx]),
        np.concatenate([blocks, -diag]),
    )


def assemble_five_point(m):
    """5-point stencil Laplacian from a moment field of shape (H, W, 4, 4)."""
    m = np.asarray(m, dtype=np.float64)
    h, w = m.shape[:2]
    if h < 2 and w < 2:
        raise ValueError("5-point stencil needs at least two pixels")
    pid = np.arange(h * w).reshape(h, w)
    rows, cols, blocks = [], [], []
    for a, b, ma, mb in (
        (pid[:, :-1], pid[:, 1:], m[:, :-1], m[:, 1:]),
        (pid[:-1, :], pid[1:, :], m[:-1, :], m[1:, :]),
    ):
        c = -0.5 * (ma + mb).reshape(-1, 4, 4)
        a, b = a.ravel(), b.ravel()
        rows += [a, b]
        cols += [b, a]
        blocks += [c, c]
    return _with_diagonal(h * w, np.concatenate(rows), np.concatenate(cols),
                          np.concatenate(blocks))


def window_counts(h, w, radius):
    """Number of in-bounds pixels of the (cropped) window centred at each pixel."""
    def extent(n):
        i = np.arange(n)
        return np.minimum(i + radius, n - 1) - np.maximum(i - radius, 0) + 1
    return np.outer(extent(h), extent(w))


def assemble_general(image, radius, m=None):
    """Window-based Laplacian; windows are cropped at the image border.

    ``m`` defaults to the plain moments X X^T of ``image``.
    """
    if radius < 1:
        raise ValueError("window radius must be >= 1")
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    size = 2 * radius + 1
    if h < size or w < size:
        raise ValueError(f"a {size}x{size} window does not fit a {h}x{w} image")
    if m is None:
        m = moments(image)
    weighted = m / window_counts(h, w, radius)[..., None, None]

    pid = np.arange(h * w).reshape(h, w)
    offsets = [(dy, dx) for dy in range(-radius, radius + 1)
               for dx in range(-radius, radius + 1)]
    jy, jx = np.mgrid[0:h, 0:w]
    rows, cols, blocks = [], [], []
    for d1 in offsets:
        iy, ix = jy + d1[0], jx + d1[1]
        in1 = (iy >= 0) & (iy < h) & (ix >= 0) & (ix < w)
        for d2 in offsets:
            if d1 == d2:
                continue
            ky, kx = jy + d2[0], jx + d2[1]
            ok = in1 & (ky >= 0) & (ky < h) & (kx >= 0) & (kx < w)
            rows.append(pid[iy[ok], ix[ok]])
            cols.append(pid[ky[ok], kx[ok]])
            blocks.append(-weighted[ok])
    return _with_diagonal(h * w, np.concatenate(rows), np.concatenate(cols),
                          np.concatenate(blocks))


def assemble(image, config=None):
    """Laplacian A for ``image`` under a ``StencilConfig``."""
    config = config or StencilConfig()
    m = moments(image, config.spatial_prior)
    if config.mode == "five_point":
        return assemble_five_point(m)
    return assemble_general(image, config.radius, m)


def energy(a, beta):
    """beta^T A beta for an (H, W, 4) field."""
    return a.quadratic_form(np.asarray(beta).reshape(-1))
