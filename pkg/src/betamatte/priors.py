"""Unary Gaussian priors on beta.

Each prior contributes a PSD 4x4 block A0_i and a vector mu0_i per pixel; the
induced energy is ``0.5 * beta_i^T A0_i beta_i - mu0_i^T beta_i`` (up to a
constant). Priors from independent sources simply add.
"""

from dataclasses import dataclass

import numpy as np

from .core import (BACKGROUND, FOREGROUND, DimensionError, as_confidence,
                   as_trimap, augment)
from .sparse import BlockSparseMatrix


@dataclass(frozen=True)
class UnaryPrior:
    """Per-pixel blocks ``a0`` (H, W, 4, 4) and vectors ``mu0`` (H, W, 4)."""

    a0: np.ndarray
    mu0: np.ndarray

    def __add__(self, other):
        return UnaryPrior(self.a0 + other.a0, self.mu0 + other.mu0)

    @property
    def shape(self):
        return self.mu0.shape[:2]

    def matrix(self):
        return BlockSparseMatrix.block_diagonal(self.a0.reshape(-1, 4, 4))

    def rhs(self):
        return self.mu0.reshape(-1)

    def is_empty(self):
        return not np.any(self.a0)


def prior_from_samples(samples):
    """Weighted moments of ``(X, alpha, lambda)`` samples.

    Returns ``A0 = mean(lambda X X^T)`` and ``mu0 = mean(lambda alpha X)``.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    x = np.array([s[0] for s in samples], dtype=np.float64).reshape(-1, 4)
    alpha = np.array([s[1] for s in samples], dtype=np.float64)
    lam = np.array([s[2] for s in samples], dtype=np.float64)
    if np.any(lam < 0):
        raise ValueError("sample confidences must be nonnegative")
    n = len(samples)
    a0 = np.einsum("n,ni,nj->ij", lam, x, x) / n
    mu0 = np.einsum("n,n,ni->i", lam, alpha, x) / n
    return a0, mu0


def alpha_prior(x, alpha0, lam):
    """Pull X^T beta towards alpha0 with weight lam."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    x = np.asarray(x, dtype=np.float64)
    return lam * np.outer(x, x), lam * alpha0 * x


def fb_prior(x, target_alpha, lam, xxt=None):
    """Foreground (target 1) or background (target 0) colour prior.

    With a known colour ``x`` the blocks are ``lam x x^T`` and
    ``lam * target * x``. For a colour distribution pass the expectations:
    ``x`` as E{X} and ``xxt`` as E{X X^T}.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if target_alpha not in (0, 1):
        raise ValueError("target_alpha must be 1 (foreground) or 0 (background)")
    x = np.asarray(x, dtype=np.float64)
    second = np.outer(x, x) if xxt is None else np.asarray(xxt, dtype=np.float64)
    return lam * second, lam * target_alpha * x


def alpha_prior_field(image, alpha0, confidence):
    """Vectorised ``alpha_prior`` over every pixel."""
    x = augment(image)
    lam = np.asarray(confidence, dtype=np.float64)
    a0 = lam[..., None, None] * x[..., :, None] * x[..., None, :]
    mu0 = (lam * np.asarray(alpha0, dtype=np.float64))[..., None] * x
    return UnaryPrior(a0, mu0)


def build_unary(image, trimap, alpha0=None, confidence=None, lambda_known=100.0):
    """Sum of trimap anchors and (optional) sampled alpha priors."""
    image = np.asarray(image, dtype=np.float64)
    trimap = as_trimap(trimap, image.shape)
    if alpha0 is not None and confidence is None:
        raise ValueError("alpha0 supplied without a confidence map")
    if confidence is not None and alpha0 is None:
        raise ValueError("confidence supplied without an alpha0 map")

    known = (trimap == FOREGROUND) | (trimap == BACKGROUND)
    prior = alpha_prior_field(image, (trimap == FOREGROUND).astype(np.float64),
                              np.where(known, float(lambda_known), 0.0))
    if alpha0 is not None:
        alpha0 = np.asarray(alpha0, dtype=np.float64)
        if alpha0.shape != trimap.shape:
            raise DimensionError("alpha0 does not match the image")
        confidence = as_confidence(confidence, trimap.shape)
        prior = prior + alpha_prior_field(image, alpha0, confidence)
    return prior
