import numpy as np
import pytest

from betamatte.beta_laplacian import Isotropic, StencilConfig, assemble
from betamatte.priors import build_unary
from betamatte.sparse import (BlockSparseMatrix, BlockSystem, ConvergenceError, block_jacobi,
                              dense_solve, solve)

from conftest import random_trimap


def test_matvec_identity_and_zero(rng):
    v = rng.normal(size=12)
    eye = BlockSparseMatrix.block_diagonal(np.tile(np.eye(4), (3, 1, 1)))
    assert np.array_equal(eye.matvec(v), v)
    assert np.array_equal(BlockSparseMatrix(3).matvec(v), np.zeros(12))


def test_matvec_matches_dense_expansion(rng):
    b11, b12, b22 = rng.normal(size=(3, 4, 4))
    m = BlockSparseMatrix(2, [0, 0, 1, 1], [0, 1, 0, 1], [b11, b12, b12.T, b22])
    dense = np.block([[b11, b12], [b12.T, b22]])
    v = rng.normal(size=8)
    assert np.max(np.abs(m.matvec(v) - dense @ v)) < 1e-12
    assert np.allclose(m.block(0, 1), b12)


def test_duplicate_blocks_accumulate():
    m = BlockSparseMatrix(1, [0, 0], [0, 0], [np.eye(4), 2 * np.eye(4)])
    assert np.allclose(m.block(0, 0), 3 * np.eye(4))


def test_matvec_dimension_mismatch():
    with pytest.raises(ValueError):
        BlockSparseMatrix(2).matvec(np.zeros(5))


def test_pure_prior_returns_beta0(rng):
    beta0 = rng.normal(size=(5, 4))
    system = BlockSystem(BlockSparseMatrix(5) + BlockSparseMatrix.block_diagonal(
        np.tile(np.eye(4), (5, 1, 1))), beta0.ravel())
    assert np.allclose(solve(system), beta0)


def _system(rng, h, w, mode="five_point"):
    img = rng.random((h, w, 3))
    a = assemble(img, StencilConfig(mode, 1, Isotropic(1e-4)))
    prior = build_unary(img, random_trimap(rng, h, w))
    return BlockSystem(a + prior.matrix(), prior.rhs()), a


def test_two_pixel_anchor_matches_dense(rng):
    img = rng.random((1, 2, 3))
    a = assemble(img)
    a0 = np.zeros((2, 4, 4))
    a0[0] = 5 * np.eye(4)
    mu0 = np.zeros((2, 4))
    mu0[0] = 5 * rng.normal(size=4)
    system = BlockSystem(a + BlockSparseMatrix.block_diagonal(a0), mu0.ravel())
    ref = np.linalg.solve(system.matrix.to_dense(), system.rhs)
    assert np.max(np.abs(solve(system, tol=1e-14).ravel() - ref)) < 1e-8


@pytest.mark.parametrize("mode", ["five_point", "window"])
def test_cg_matches_dense_8x8(rng, mode):
    system, _ = _system(rng, 8, 8, mode)
    cg = solve(system, tol=1e-12)
    direct = solve(system, method="dense")
    assert np.max(np.abs(cg - direct)) < 1e-6
    assert system.residual(cg) <= 1e-12


def test_assembled_systems_are_psd_and_symmetric(rng):
    system, a = _system(rng, 8, 8)
    assert system.matrix.is_symmetric()
    for _ in range(100):
        v = rng.normal(size=4 * 64)
        assert system.matrix.quadratic_form(v) >= -1e-9
    # e_i probes reproduce block(i,k) = block(k,i)^T
    dense = a.to_dense()
    for i, k in [(0, 1), (9, 8), (27, 35)]:
        e = np.zeros(4 * 64)
        e[4 * k:4 * k + 4] = 1
        col = a.matvec(e)[4 * i:4 * i + 4]
        assert np.allclose(col, dense[4 * i:4 * i + 4, 4 * k:4 * k + 4].sum(axis=1))
        assert np.allclose(a.block(i, k), a.block(k, i).T)


def test_non_convergence_reports_residual(rng):
    system, _ = _system(rng, 8, 8)
    with pytest.raises(ConvergenceError) as info:
        solve(system, tol=1e-14, max_iter=2)
    assert info.value.residual > 1e-14
    assert info.value.iterations == 2


def test_singular_diagonal_blocks_fall_back_to_identity():
    blocks = np.zeros((3, 4, 4))
    blocks[1] = 2 * np.eye(4)
    inv = block_jacobi(blocks)
    assert np.allclose(inv[0], np.eye(4)) and np.allclose(inv[2], np.eye(4))
    assert np.allclose(inv[1], 0.5 * np.eye(4), rtol=1e-9)


def test_zero_rhs_gives_zero(rng):
    system, _ = _system(rng, 4, 4)
    zero = BlockSystem(system.matrix, np.zeros_like(system.rhs))
    assert np.all(solve(zero) == 0)


def test_dense_path_size_limit():
    system = BlockSystem(BlockSparseMatrix(4097), np.zeros(4 * 4097))
    with pytest.raises(ValueError):
        dense_solve(system)
