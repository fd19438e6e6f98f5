"""Symmetric block-sparse matrices with 4x4 blocks and their solvers."""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .core import DimensionError

log = logging.getLogger(__name__)

BLOCK = 4
DENSE_LIMIT = 4096  # pixels; dense path allocates (4n)^2 doubles
_TINY = 1e-300


class ConvergenceError(RuntimeError):
    """CG did not reach the requested tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularSystemError(ValueError):
    """The system carries no prior at all, so its solution is undetermined."""


def _expand_blocks(rows, cols, blocks):
    # (nb,) block coords + (nb, 4, 4) values -> scalar COO triplets
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    blocks = np.asarray(blocks, dtype=np.float64).reshape(-1, BLOCK, BLOCK)
    off = np.arange(BLOCK)
    r = (BLOCK * rows)[:, None, None] + off[None, :, None]
    c = (BLOCK * cols)[:, None, None] + off[None, None, :]
    r, c = np.broadcast_arrays(r, c)
    return r.ravel(), c.ravel(), blocks.ravel()


class BlockSparseMatrix:
    """Square matrix over ``n_pixels`` unknown 4-vectors.

    Blocks are accumulated as coordinate lists (duplicates add up) and
    compiled once into a BSR layout with 4x4 blocks.
    """

    def __init__(self, n_pixels, rows=(), cols=(), blocks=None):
        self.n_pixels = int(n_pixels)
        n = BLOCK * self.n_pixels
        if blocks is None or len(rows) == 0:
            csr = scipy.sparse.csr_matrix((n, n))
        else:
            r, c, v = _expand_blocks(rows, cols, blocks)
            csr = scipy.sparse.coo_matrix((v, (r, c)), shape=(n, n)).tocsr()
        self._bsr = csr.tobsr(blocksize=(BLOCK, BLOCK))
        self._bsr.sum_duplicates()
        if not np.all(np.isfinite(self._bsr.data)):
            raise ValueError("block entries must be finite")

    @classmethod
    def from_scipy(cls, mat):
        out = cls.__new__(cls)
        if mat.shape[0] != mat.shape[1] or mat.shape[0] % BLOCK:
            raise DimensionError(f"cannot view {mat.shape} as 4x4 blocks")
        out.n_pixels = mat.shape[0] // BLOCK
        out._bsr = scipy.sparse.bsr_matrix(mat, blocksize=(BLOCK, BLOCK))
        return out

    @classmethod
    def block_diagonal(cls, blocks):
        blocks = np.asarray(blocks, dtype=np.float64).reshape(-1, BLOCK, BLOCK)
        idx = np.arange(len(blocks))
        return cls(len(blocks), idx, idx, blocks)

    @property
    def shape(self):
        return self._bsr.shape

    def tocsr(self):
        return self._bsr.tocsr()

    def matvec(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.size != BLOCK * self.n_pixels:
            raise DimensionError(
                f"vector of size {v.size} does not match {self.n_pixels} blocks")
        return self._bsr @ v.reshape(-1)

    def __matmul__(self, v):
        return self.matvec(v)

    def __add__(self, other):
        if not isinstance(other, BlockSparseMatrix):
            return NotImplemented
        if other.n_pixels != self.n_pixels:
            raise DimensionError("block matrices of different sizes")
        return BlockSparseMatrix.from_scipy(self._bsr + other._bsr)

    def __mul__(self, scalar):
        return BlockSparseMatrix.from_scipy(self._bsr * float(scalar))

    __rmul__ = __mul__

    def block(self, i, k):
        bsr = self._bsr
        lo, hi = bsr.indptr[i], bsr.indptr[i + 1]
        hit = np.flatnonzero(bsr.indices[lo:hi] == k)
        if hit.size == 0:
            return np.zeros((BLOCK, BLOCK))
        return bsr.data[lo + hit].sum(axis=0)

    def diagonal_blocks(self):
        d = np.zeros((self.n_pixels, BLOCK, BLOCK))
        bsr = self._bsr
        rows = np.repeat(np.arange(self.n_pixels), np.diff(bsr.indptr))
        on_diag = bsr.indices == rows
        d[rows[on_diag]] += bsr.data[on_diag]
        return d

    def block_pattern(self):
        """Sorted list of (row, col) pixel pairs holding a stored block."""
        bsr = self._bsr
        rows = np.repeat(np.arange(self.n_pixels), np.diff(bsr.indptr))
        nz = np.any(bsr.data != 0, axis=(1, 2))
        return sorted(zip(rows[nz].tolist(), bsr.indices[nz].tolist()))

    def to_dense(self):
        return self._bsr.toarray()

    def is_symmetric(self, atol=1e-12):
        diff = self._bsr - self._bsr.T
        return diff.nnz == 0 or np.abs(diff.data).max() <= atol

    def quadratic_form(self, v):
        v = np.asarray(v, dtype=np.float64).reshape(-1)
        return float(v @ self.matvec(v))


@dataclass(frozen=True)
class BlockSystem:
    """``matrix @ beta = rhs`` with ``matrix = A + A0`` and ``rhs = mu0``."""

    matrix: BlockSparseMatrix
    rhs: np.ndarray

    def __post_init__(self):
        rhs = np.asarray(self.rhs, dtype=np.float64).reshape(-1)
        if rhs.size != BLOCK * self.matrix.n_pixels:
            raise DimensionError("rhs does not match the matrix size")
        if not np.all(np.isfinite(rhs)):
            raise ValueError("rhs must be finite")
        object.__setattr__(self, "rhs", rhs)

    def residual(self, beta):
        r = self.matrix.matvec(beta) - self.rhs
        return np.linalg.norm(r) / max(np.linalg.norm(self.rhs), _TINY)


def block_jacobi(diag_blocks):
    """Inverse of each regularised 4x4 diagonal block.

    Blocks that stay singular (e.g. all-zero) fall back to the identity.
    """
    diag_blocks = np.asarray(diag_blocks, dtype=np.float64)
    trace = np.trace(diag_blocks, axis1=1, axis2=2)
    reg = diag_blocks + (1e-12 * trace / 4.0)[:, None, None] * np.eye(BLOCK)
    inv = np.broadcast_to(np.eye(BLOCK), diag_blocks.shape).copy()
    ok = trace > 0
    if np.any(ok):
        with np.errstate(all="ignore"):
            try:
                cand = np.linalg.inv(reg[ok])
            except np.linalg.LinAlgError:
                cand = np.stack([_safe_inv(b) for b in reg[ok]])
        good = np.all(np.isfinite(cand), axis=(1, 2))
        sel = np.flatnonzero(ok)[good]
        inv[sel] = cand[good]
    return inv


def _safe_inv(block):
    try:
        return np.linalg.inv(block)
    except np.linalg.LinAlgError:
        return np.full((BLOCK, BLOCK), np.nan)


def conjugate_gradient(system, tol=1e-12, max_iter=None, x0=None):
    """Block-Jacobi preconditioned CG. Returns ``(x, relative_residual, iterations)``."""
    mat = system.matrix
    b = system.rhs
    n = b.size
    if max_iter is None:
        max_iter = 10 * mat.n_pixels
    bnorm = max(np.linalg.norm(b), _TINY)
    pinv = block_jacobi(mat.diagonal_blocks())

    def precondition(r):
        return np.einsum("nij,nj->ni", pinv, r.reshape(-1, BLOCK)).reshape(-1)

    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=np.float64).reshape(-1).copy()
    r = b - mat.matvec(x)
    res = np.linalg.norm(r) / bnorm
    if res <= tol:
        return x, res, 0
    z = precondition(r)
    p = z.copy()
    rz = r @ z
    it = 0
    for it in range(1, max_iter + 1):
        q = mat.matvec(p)
        pq = p @ q
        if pq <= 0:
            # direction in the null space: a consistent system is already solved there
            break
        step = rz / pq
        x += step * p
        r -= step * q
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            return x, res, it
        z = precondition(r)
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    # recompute the true residual before giving up
    res = np.linalg.norm(b - mat.matvec(x)) / bnorm
    if res <= tol:
        return x, res, it
    raise ConvergenceError(
        f"CG stopped after {it} iterations at relative residual {res:.3e} (tol {tol:.1e})",
        residual=res, iterations=it)


def dense_solve(system):
    """Direct dense solve; minimum-norm least squares if the matrix is singular."""
    if system.matrix.n_pixels > DENSE_LIMIT:
        raise ValueError(
            f"dense solve limited to {DENSE_LIMIT} pixels, got {system.matrix.n_pixels}")
    a = system.matrix.to_dense()
    try:
        return scipy.linalg.solve(a, system.rhs, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return scipy.linalg.lstsq(a, system.rhs)[0]


def solve(system, tol=1e-12, max_iter=None, method="cg"):
    """Solve ``(A + A0) beta = mu0`` and return beta as an (n_pixels, 4) array."""
    if method == "cg":
        x, res, iters = conjugate_gradient(system, tol=tol, max_iter=max_iter)
        log.debug("CG converged in %d iterations, residual %.3e", iters, res)
    elif method == "dense":
        x = dense_solve(system)
    else:
        raise ValueError(f"unknown solver method {method!r}")
    return x.reshape(-1, BLOCK)
