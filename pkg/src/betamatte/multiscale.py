"""Single-scale beta matting and the coarse-to-fine beta upscaling pipeline."""

from dataclasses import dataclass, field, replace

import numpy as np

from .beta_laplacian import StencilConfig, assemble
from .core import BACKGROUND, FOREGROUND, UNKNOWN, as_image, as_trimap, reconstruct_alpha
from .priors import build_unary
from .sparse import BlockSystem, SingularSystemError, solve


@dataclass(frozen=True)
class MattingConfig:
    stencil: StencilConfig = field(default_factory=StencilConfig)
    lambda_known: float = 100.0
    tol: float = 1e-12
    max_iter: int | None = None
    solver: str = "cg"


@dataclass(frozen=True)
class PyramidLevel:
    image: np.ndarray
    trimap: np.ndarray
    alpha0: np.ndarray | None = None
    confidence: np.ndarray | None = None
    scale_divisor: int = 1


def beta_system(image, trimap, alpha0=None, confidence=None, config=None):
    """Assemble ``(A + A0) beta = mu0`` for one image."""
    config = config or MattingConfig()
    prior = build_unary(image, trimap, alpha0, confidence, config.lambda_known)
    if prior.is_empty():
        raise SingularSystemError("no unary prior anywhere: the beta system is singular")
    a = assemble(image, config.stencil)
    return BlockSystem(a + prior.matrix(), prior.rhs())


def solve_beta(image, trimap, alpha0=None, confidence=None, config=None):
    """Beta field (H, W, 4) minimising the Laplacian energy plus unary priors."""
    config = config or MattingConfig()
    image = np.asarray(image, dtype=np.float64)
    system = beta_system(image, trimap, alpha0, confidence, config)
    beta = solve(system, tol=config.tol, max_iter=config.max_iter, method=config.solver)
    return beta.reshape(image.shape[:2] + (4,))


def _box_reduce(plane, factor):
    # mean over factor x factor blocks; partial blocks at the far edges are averaged too
    h, w = plane.shape[:2]
    ys, xs = np.arange(0, h, factor), np.arange(0, w, factor)
    sums = np.add.reduceat(np.add.reduceat(plane, ys, axis=0), xs, axis=1)
    cy = np.minimum(ys + factor, h) - ys
    cx = np.minimum(xs + factor, w) - xs
    counts = np.outer(cy, cx)
    if plane.ndim == 3:
        counts = counts[..., None]
    return sums / counts


def _reduce_trimap(trimap, factor):
    fg = _box_reduce((trimap == FOREGROUND).astype(np.float64), factor)
    bg = _box_reduce((trimap == BACKGROUND).astype(np.float64), factor)
    out = np.full(fg.shape, UNKNOWN, dtype=np.int8)
    out[fg == 1.0] = FOREGROUND
    out[bg == 1.0] = BACKGROUND
    return out


def downsample(level, factor):
    """Box-filter the image, alpha0 and confidence; decimate the trimap conservatively."""
    if factor not in (2, 4):
        raise ValueError("downsampling factor must be 2 or 4")
    h, w = level.image.shape[:2]
    ch, cw = -(-h // factor), -(-w // factor)
    if ch < 2 or cw < 2:
        raise ValueError(f"{h}x{w} image is too small to reduce by {factor}")
    return PyramidLevel(
        image=_box_reduce(np.asarray(level.image, dtype=np.float64), factor),
        trimap=_reduce_trimap(np.asarray(level.trimap), factor),
        alpha0=None if level.alpha0 is None else _box_reduce(level.alpha0, factor),
        confidence=None if level.confidence is None else _box_reduce(level.confidence, factor),
        scale_divisor=level.scale_divisor * factor,
    )


def _interp_axis(n_src, n_dst):
    # half-pixel aligned sample positions; linear extrapolation past the edge samples
    pos = (np.arange(n_dst) + 0.5) * (n_src / n_dst) - 0.5
    if n_src == 1:
        return np.zeros(n_dst, dtype=np.int64), np.zeros(n_dst)
    i0 = np.clip(np.floor(pos).astype(np.int64), 0, n_src - 2)
    return i0, pos - i0


def upsample_beta(coarse, target_w, target_h):
    """Bilinear upsampling of each beta channel to (target_h, target_w)."""
    coarse = np.asarray(coarse, dtype=np.float64)
    h, w = coarse.shape[:2]
    if target_h < h or target_w < w:
        raise ValueError("target size must not be smaller than the coarse field")
    iy, fy = _interp_axis(h, target_h)
    ix, fx = _interp_axis(w, target_w)
    iy1 = np.minimum(iy + 1, h - 1)
    ix1 = np.minimum(ix + 1, w - 1)
    rows = coarse[iy] * (1 - fy)[:, None, None] + coarse[iy1] * fy[:, None, None]
    return rows[:, ix] * (1 - fx)[None, :, None] + rows[:, ix1] * fx[None, :, None]


def matte_multiscale(full, factor=1, config=None):
    """Solve beta at 1/factor resolution, upsample it and rebuild full-res alpha.

    Returns ``(beta, alpha)`` at full resolution.
    """
    if factor not in (1, 2, 4):
        raise ValueError("scale factor must be 1, 2 or 4")
    image = as_image(full.image)
    full = replace(full, image=image, trimap=as_trimap(full.trimap, image.shape))
    level = full if factor == 1 else downsample(full, factor)
    beta = solve_beta(level.image, level.trimap, level.alpha0, level.confidence, config)
    if factor != 1:
        h, w = image.shape[:2]
        beta = upsample_beta(beta, w, h)
    return beta, reconstruct_alpha(image, beta)
