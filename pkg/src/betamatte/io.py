"""PNG and BETAF32 file formats."""

import numpy as np
import cv2

from .core import BACKGROUND, FOREGROUND, UNKNOWN, as_beta

BETA_MAGIC = b"BETAF32"
_BETA_DTYPE = np.dtype("<f4")


def _read_raw(path):
    data = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if data is None:
        raise OSError(f"cannot read image {path}")
    if data.dtype == np.uint8:
        scale = 255.0
    elif data.dtype == np.uint16:
        scale = 65535.0
    else:
        raise OSError(f"unsupported sample type {data.dtype} in {path}")
    return data.astype(np.float64) / scale


def read_image(path):
    """RGB image as float64 (H, W, 3) in [0, 1]; grey inputs are replicated."""
    data = _read_raw(path)
    if data.ndim == 2:
        return np.repeat(data[..., None], 3, axis=2)
    if data.shape[2] == 4:
        data = data[..., :3]
    return np.ascontiguousarray(data[..., ::-1])


def read_map(path):
    """Single-channel map in [0, 1]; colour files are reduced by channel mean."""
    data = _read_raw(path)
    if data.ndim == 3:
        data = data[..., :3].mean(axis=2)
    return data


def read_trimap(path):
    """Trimap labels: < 0.2 background, > 0.8 foreground, otherwise unknown."""
    value = read_map(path)
    labels = np.full(value.shape, UNKNOWN, dtype=np.int8)
    labels[value < 0.2] = BACKGROUND
    labels[value > 0.8] = FOREGROUND
    return labels


def trimap_to_gray(trimap):
    gray = np.full(trimap.shape, 128, dtype=np.uint8)
    gray[trimap == FOREGROUND] = 255
    gray[trimap == BACKGROUND] = 0
    return gray


def write_map(path, alpha, bits=8):
    """Clamp to [0, 1] and write a grayscale PNG of 8 or 16 bits."""
    if bits not in (8, 16):
        raise ValueError("bits must be 8 or 16")
    top = 255 if bits == 8 else 65535
    dtype = np.uint8 if bits == 8 else np.uint16
    data = np.rint(np.clip(alpha, 0.0, 1.0) * top).astype(dtype)
    if not cv2.imwrite(str(path), data):
        raise OSError(f"cannot write {path}")


def write_image(path, image):
    data = np.rint(np.clip(image, 0.0, 1.0) * 255).astype(np.uint8)
    if not cv2.imwrite(str(path), np.ascontiguousarray(data[..., ::-1])):
        raise OSError(f"cannot write {path}")


def write_beta(path, beta):
    """BETAF32: ASCII header ``BETAF32 <w> <h>\\n`` then row-major little-endian float32 quads."""
    beta = as_beta(beta)
    h, w = beta.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"%s %d %d\n" % (BETA_MAGIC, w, h))
        fh.write(np.ascontiguousarray(beta, dtype=_BETA_DTYPE).tobytes())


def read_beta(path):
    """Read a BETAF32 file as a float32 array of shape (H, W, 4)."""
    with open(path, "rb") as fh:
        header = fh.readline()
        payload = fh.read()
    parts = header.split()
    if len(parts) != 3 or parts[0] != BETA_MAGIC or not header.endswith(b"\n"):
        raise OSError(f"{path} is not a BETAF32 file")
    w, h = int(parts[1]), int(parts[2])
    if len(payload) != w * h * 4 * _BETA_DTYPE.itemsize:
        raise OSError(f"{path}: payload size does not match {w}x{h}")
    return np.frombuffer(payload, dtype=_BETA_DTYPE).reshape(h, w, 4).copy()


def beta_preview(beta):
    """Each channel mapped through v / 5 + 0.5 for display."""
    return np.clip(np.asarray(beta) / 5.0 + 0.5, 0.0, 1.0)
