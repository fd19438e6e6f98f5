"""Closed-form matting baseline: scalar matting Laplacian and (L + D) alpha = D alpha0."""

import numpy as np
import scipy.sparse

from .core import BACKGROUND, FOREGROUND, as_trimap
from .sparse import ConvergenceError, SingularSystemError


def _windows(h, w, radius):
    # (n_windows, window_size) pixel ids for every cropped window, grouped by size
    pid = np.arange(h * w).reshape(h, w)
    groups = {}
    for y in range(h):
        y0, y1 = max(y - radius, 0), min(y + radius, h - 1) + 1
        for x in range(w):
            x0, x1 = max(x - radius, 0), min(x + radius, w - 1) + 1
            ids = pid[y0:y1, x0:x1].ravel()
            groups.setdefault(ids.size, []).append(ids)
    return {n: np.array(g) for n, g in groups.items()}


def assemble_cf_laplacian(image, radius=1, eps=1e-7):
    """Scalar matting Laplacian L as a CSR matrix.

    Each window k (cropped at the border, size n_k) adds
    ``delta_ij - (1 + (C_i - mu_k)^T (R_k + eps/n_k I)^-1 (C_j - mu_k)) / n_k``
    for every pair i, j inside it; R_k is the population covariance.
    """
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    if h * w < 2:
        raise ValueError("closed-form Laplacian needs at least two pixels")
    if radius < 1:
        raise ValueError("window radius must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    colours = image.reshape(-1, 3)
    rows, cols, vals = [], [], []
    for n, win in _windows(h, w, radius).items():
        c = colours[win]
        d = c - c.mean(axis=1, keepdims=True)
        # d (d^T d / n + eps/n I)^-1 d^T == n U diag(s^2 / (s^2 + eps)) U^T with d = U S V^T;
        # the SVD form avoids inverting ill-conditioned covariances of small cropped windows
        u, s, _ = np.linalg.svd(d, full_matrices=False)
        shrink = n * s ** 2 / (s ** 2 + eps)
        g = np.einsum("kni,ki,kmi->knm", u, shrink, u)
        lw = np.eye(n) - (1.0 + g) / n
        rows.append(np.repeat(win, n, axis=1).ravel())
        cols.append(np.tile(win, (1, n)).ravel())
        vals.append(lw.ravel())
    n_pix = h * w
    lap = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_pix, n_pix)).tocsr()
    lap.sum_duplicates()
    return lap


def confidence_system(trimap, alpha0=None, confidence=None, lambda_known=100.0):
    """Diagonal D and right-hand side D alpha0 combining trimap and sampled priors."""
    trimap = as_trimap(trimap)
    known = (trimap == FOREGROUND) | (trimap == BACKGROUND)
    d = np.where(known, float(lambda_known), 0.0)
    rhs = d * (trimap == FOREGROUND)
    if alpha0 is not None or confidence is not None:
        if alpha0 is None or confidence is None:
            raise ValueError("alpha0 and confidence must be supplied together")
        lam = np.asarray(confidence, dtype=np.float64)
        d = d + lam
        rhs = rhs + lam * np.asarray(alpha0, dtype=np.float64)
    return d.ravel(), rhs.ravel()


def _pcg_scalar(a, b, tol, max_iter):
    # Jacobi-preconditioned CG on a scalar SPD system
    diag = a.diagonal()
    pinv = np.where(diag > 0, 1.0 / np.where(diag > 0, diag, 1.0), 1.0)
    bnorm = max(np.linalg.norm(b), 1e-300)
    x = np.zeros_like(b)
    if not np.any(b):
        return x
    r = b.copy()
    z = pinv * r
    p = z.copy()
    rz = r @ z
    for it in range(1, max_iter + 1):
        q = a @ p
        step = rz / (p @ q)
        x += step * p
        r -= step * q
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            return x
        z = pinv * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"CG stopped after {max_iter} iterations at relative residual {res:.3e}",
        residual=res, iterations=max_iter)


def solve_cf(image, trimap, alpha0=None, confidence=None, lambda_known=100.0,
             eps=1e-7, radius=1, tol=1e-12, max_iter=None, method="cg"):
    """Closed-form matte; returns the raw (unclamped) alpha of shape (H, W)."""
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    d, rhs = confidence_system(trimap, alpha0, confidence, lambda_known)
    if not np.any(d > 0):
        raise SingularSystemError("no known or confident pixel: (L + D) is singular")
    a = assemble_cf_laplacian(image, radius, eps) + scipy.sparse.diags(d)
    if method == "dense":
        alpha = np.linalg.solve(a.toarray(), rhs)
    else:
        alpha = _pcg_scalar(a.tocsr(), rhs, tol, max_iter or 10 * h * w)
    return alpha.reshape(h, w)
