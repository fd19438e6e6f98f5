"""
The beta Laplacian is the closed-form energy with alpha integrated out
======================================================================

For square windows, beta^T A beta equals the window energy minimised over
alpha. Here we evaluate both on a small image and then solve the joint
problem in (alpha, a, b) by plain least squares to see that it lands on the
same beta as the block-sparse solve.
"""

import numpy as np

from betamatte import BlockSparseMatrix, BlockSystem, assemble_general, reconstruct_alpha, solve
from betamatte.core import augment

rng = np.random.default_rng(0)
img = rng.random((6, 6, 3))
x = augment(img)
A = assemble_general(img, radius=1)

###############################################################################
# Window energy, alpha eliminated by its least-squares value (the window mean)
beta = rng.normal(size=(6, 6, 4))
total = 0.0
for jy in range(6):
    for jx in range(6):
        s = [(y, xx) for y in range(jy - 1, jy + 2) for xx in range(jx - 1, jx + 2)
             if 0 <= y < 6 and 0 <= xx < 6]
        v = np.array([x[jy, jx] @ beta[p] for p in s])
        total += np.sum((v - v.mean()) ** 2)
print(f"direct sum   {total:.12f}")
print(f"beta^T A beta {A.quadratic_form(beta):.12f}")

###############################################################################
# Pin the border with full-rank priors and solve
anchors = np.zeros((6, 6), bool)
anchors[[0, -1], :] = anchors[:, [0, -1]] = True
a0 = np.where(anchors[..., None, None], np.eye(4), 0.0).reshape(-1, 4, 4)
mu0 = np.where(anchors[..., None], beta, 0.0).ravel()
sol = solve(BlockSystem(A + BlockSparseMatrix.block_diagonal(a0), mu0)).reshape(6, 6, 4)
print("interior alpha:")
print(np.round(reconstruct_alpha(img, sol)[1:-1, 1:-1], 3))
