"""
Pulling a full-resolution matte from a coarse beta
==================================================

beta is solved at half and quarter resolution, bilinearly upsampled, and
applied to the full-resolution colours. Because a and b vary slowly, the
result stays close to the full-resolution solve even though alpha itself has
sharp transitions.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from betamatte import (MattingConfig, PyramidLevel, SmoothedMoments, StencilConfig, mad,
                       matte_multiscale, ssim)
from betamatte.synthetic import make_suite

config = MattingConfig(StencilConfig("five_point", 1, SmoothedMoments(1.0, 1e-4)))

rows = []
for scene in make_suite(8, size=64, seed=40):
    level = PyramidLevel(scene.image, scene.trimap, scene.alpha0, scene.confidence)
    full = matte_multiscale(level, 1, config)[1]
    half = matte_multiscale(level, 2, config)[1]
    quarter = matte_multiscale(level, 4, config)[1]
    rows.append((ssim(full, half), mad(full, half), ssim(full, quarter), mad(full, quarter)))

rows = np.array(rows)
print("             SSIM mean  MAD mean")
print(f"1/2 res      {rows[:, 0].mean():.4f}     {rows[:, 1].mean():.4f}")
print(f"1/4 res      {rows[:, 2].mean():.4f}     {rows[:, 3].mean():.4f}")

###############################################################################
# Last scene, side by side
fig, axes = plt.subplots(1, 3, figsize=(9, 3.2))
for ax, (title, a) in zip(axes, [("full res", full), ("from 1/2", half), ("from 1/4", quarter)]):
    ax.imshow(np.clip(a, 0, 1), cmap="gray", vmin=0, vmax=1)
    ax.set_title(title)
    ax.axis("off")
fig.tight_layout()
fig.savefig("multiscale_upscaling.png", dpi=80)
