"""Shared image, trimap, alpha and beta-field conventions.

All planes are plain numpy arrays:

* image       float64 (H, W, 3), values in [0, 1]
* trimap      int8 (H, W) holding BACKGROUND / FOREGROUND / UNKNOWN
* alpha       float64 (H, W), unclamped
* confidence  float64 (H, W), >= 0
* beta        float64 (H, W, 4), per-pixel [a_R, a_G, a_B, b]

Flattened beta vectors are pixel-major: entry ``4 * (y * W + x) + c``.
"""

import numpy as np

BACKGROUND = 0
FOREGROUND = 1
UNKNOWN = 2


class DimensionError(ValueError):
    """Raised when planes that must share a grid do not."""


def as_image(data):
    """Validate ``data`` as an RGB image and return it as float64 in [0, 1].

    Integer input is normalised by its bit depth (255 for uint8, 65535 for
    uint16). Float input must already lie in [0, 1].
    """
    arr = np.asarray(data)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionError(f"expected an (H, W, 3) image, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError("image must have at least one pixel")
    if arr.dtype == np.uint8:
        arr = arr / 255.0
    elif arr.dtype == np.uint16:
        arr = arr / 65535.0
    else:
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("image values must lie in [0, 1]")
    return arr


def as_trimap(data, shape=None):
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D trimap, got shape {arr.shape}")
    if shape is not None and arr.shape != tuple(shape[:2]):
        raise DimensionError(f"trimap shape {arr.shape} does not match {tuple(shape[:2])}")
    if not np.all(np.isin(arr, (BACKGROUND, FOREGROUND, UNKNOWN))):
        raise ValueError("trimap labels must be BACKGROUND, FOREGROUND or UNKNOWN")
    return arr.astype(np.int8)


def as_confidence(data, shape=None):
    arr = np.asarray(data, dtype=np.float64)
    if shape is not None and arr.shape != tuple(shape[:2]):
        raise DimensionError(f"confidence shape {arr.shape} does not match {tuple(shape[:2])}")
    if not np.all(np.isfinite(arr)) or arr.min(initial=0.0) < 0.0:
        raise ValueError("confidence must be finite and nonnegative")
    return arr


def as_beta(data, shape=None):
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 4:
        raise DimensionError(f"expected an (H, W, 4) beta field, got shape {arr.shape}")
    if shape is not None and arr.shape[:2] != tuple(shape[:2]):
        raise DimensionError(f"beta shape {arr.shape[:2]} does not match {tuple(shape[:2])}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("beta field contains non-finite values")
    return arr


def augment(image):
    """Append the constant channel: (H, W, 3) -> (H, W, 4) with X[..., 3] == 1."""
    image = np.asarray(image, dtype=np.float64)
    return np.concatenate([image, np.ones(image.shape[:2] + (1,))], axis=2)


def lift(image, index):
    """Augmented colour ``[R, G, B, 1]`` of one pixel.

    ``index`` is either a ``(row, col)`` pair or a flat row-major index.
    """
    image = np.asarray(image)
    h, w = image.shape[:2]
    if np.ndim(index) == 0:
        if not 0 <= index < h * w:
            raise IndexError(f"pixel index {index} out of range for {h}x{w} image")
        y, x = divmod(int(index), w)
    else:
        y, x = index
        if not (0 <= y < h and 0 <= x < w):
            raise IndexError(f"pixel {(y, x)} out of range for {h}x{w} image")
    return np.append(image[y, x].astype(np.float64), 1.0)


def reconstruct_alpha(image, beta):
    """Apply the per-pixel colour filter: alpha_i = X_i . beta_i (no clamping)."""
    image = np.asarray(image, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != image.shape[:2] + (4,):
        raise DimensionError(
            f"beta shape {beta.shape} does not match image shape {image.shape}")
    return np.einsum("ijc,ijc->ij", image, beta[..., :3]) + beta[..., 3]


def trimap_to_alpha0(trimap, lambda_known=100.0):
    """Fallback initial matte and confidence built from the trimap alone."""
    trimap = as_trimap(trimap)
    if lambda_known < 0:
        raise ValueError("lambda_known must be nonnegative")
    alpha0 = np.full(trimap.shape, 0.5)
    alpha0[trimap == FOREGROUND] = 1.0
    alpha0[trimap == BACKGROUND] = 0.0
    confidence = np.where(trimap == UNKNOWN, 0.0, float(lambda_known))
    return alpha0, confidence
