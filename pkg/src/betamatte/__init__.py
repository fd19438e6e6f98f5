"""Alpha matting by solving for the per-pixel linear colour filter beta = [a; b]."""

from .beta_laplacian import (Isotropic, SmoothedMoments, StencilConfig, assemble,
                             assemble_five_point, assemble_general, moments)
from .closed_form import assemble_cf_laplacian, solve_cf
from .core import (BACKGROUND, FOREGROUND, UNKNOWN, DimensionError, augment, lift,
                   reconstruct_alpha, trimap_to_alpha0)
from .metrics import MatteMetrics, compare, mad, sad, ssim
from .multiscale import (MattingConfig, PyramidLevel, downsample, matte_multiscale,
                         solve_beta, upsample_beta)
from .priors import UnaryPrior, alpha_prior, build_unary, fb_prior, prior_from_samples
from .sparse import (BlockSparseMatrix, BlockSystem, ConvergenceError, SingularSystemError,
                     solve)

__version__ = "0.1.0"
