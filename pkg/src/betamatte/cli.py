"""Command-line entry point: ``betamatte matte | compare | bench``.

Exit codes: 0 success, 1 usage error, 2 I/O or input error, 3 solver failure.
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import io
from .beta_laplacian import Isotropic, SmoothedMoments, StencilConfig
from .closed_form import solve_cf
from .core import DimensionError
from .metrics import compare
from .multiscale import MattingConfig, PyramidLevel, matte_multiscale
from .sparse import ConvergenceError, SingularSystemError

log = logging.getLogger("betamatte")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_SOLVER = 0, 1, 2, 3
METHODS = ("beta-5point", "beta-window", "closed-form")
COMPARISONS = ("cf-vs-beta", "half", "quarter")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    method: str = "beta-5point"
    radius: int = 1
    eps_s: float = 1e-4
    sigma_s: float = 1.0
    eps_cf: float = 1e-7
    lambda_known: float = 100.0
    conf_scale: float = 100.0
    scale: int = 1
    tol: float = 1e-12
    max_iter: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.radius < 1:
            raise UsageError("--radius must be >= 1")
        if self.eps_s < 0 or self.sigma_s < 0 or self.lambda_known < 0 or self.conf_scale < 0:
            raise UsageError("--eps-s, --sigma-s, --lambda and --conf-scale must be >= 0")
        if self.eps_cf <= 0:
            raise UsageError("--eps-cf must be positive")
        if self.scale not in (1, 2, 4):
            raise UsageError("--scale must be 1, 2 or 4")
        if self.method == "closed-form" and self.scale != 1:
            raise UsageError("closed-form matting has no coarse-to-fine mode; use --scale 1")
        if self.tol <= 0 or (self.max_iter is not None and self.max_iter < 1):
            raise UsageError("--tol must be positive and --max-iter >= 1")

    def matting_config(self):
        prior = (SmoothedMoments(self.sigma_s, self.eps_s) if self.sigma_s > 0
                 else Isotropic(self.eps_s))
        mode = "window" if self.method == "beta-window" else "five_point"
        return MattingConfig(StencilConfig(mode, self.radius, prior),
                             lambda_known=self.lambda_known, tol=self.tol,
                             max_iter=self.max_iter)


def _config_from_args(args):
    return RunConfig(method=args.method, radius=args.radius, eps_s=args.eps_s,
                     sigma_s=args.sigma_s, eps_cf=args.eps_cf, lambda_known=args.lambda_known,
                     conf_scale=args.conf_scale, scale=args.scale, tol=args.tol,
                     max_iter=args.max_iter)


def load_inputs(image_path, trimap_path, alpha0_path=None, conf_path=None, conf_scale=100.0):
    if (alpha0_path is None) != (conf_path is None):
        raise UsageError("--alpha0 and --confidence must be given together")
    image = io.read_image(image_path)
    trimap = io.read_trimap(trimap_path)
    if trimap.shape != image.shape[:2]:
        raise DimensionError(f"trimap {trimap.shape} does not match image {image.shape[:2]}")
    alpha0 = confidence = None
    if alpha0_path is not None:
        alpha0 = io.read_map(alpha0_path)
        confidence = io.read_map(conf_path) * conf_scale
        if alpha0.shape != trimap.shape or confidence.shape != trimap.shape:
            raise DimensionError("alpha0/confidence do not match the image")
    return PyramidLevel(image, trimap, alpha0, confidence)


def run_matte(level, config, scale=None):
    """Alpha (and beta, None for closed-form) for one input at the given scale."""
    scale = config.scale if scale is None else scale
    if config.method == "closed-form":
        alpha = solve_cf(level.image, level.trimap, level.alpha0, level.confidence,
                         lambda_known=config.lambda_known, eps=config.eps_cf,
                         radius=config.radius, tol=config.tol, max_iter=config.max_iter)
        return None, alpha
    return matte_multiscale(level, scale, config.matting_config())


def cmd_matte(args):
    config = _config_from_args(args)
    if config.method == "closed-form" and (args.out_beta or args.out_preview):
        raise UsageError("--out-beta/--out-preview need a beta method")
    level = load_inputs(args.image, args.trimap, args.alpha0, args.confidence, config.conf_scale)
    beta, alpha = run_matte(level, config)
    io.write_map(args.out, alpha, bits=args.bits)
    if args.out_beta:
        io.write_beta(args.out_beta, beta)
    if args.out_preview:
        preview = io.beta_preview(beta)
        for c, name in enumerate(("aR", "aG", "aB", "b")):
            io.write_map(f"{args.out_preview}_{name}.png", preview[..., c])
    log.info("wrote %s (%dx%d)", args.out, alpha.shape[1], alpha.shape[0])
    return EXIT_OK


def format_metrics(m):
    return f"ssim {m.ssim:.6f}\nmad {m.mad:.6f}\nsad {m.sad:.6f}"


def cmd_compare(args):
    a, b = io.read_map(args.a), io.read_map(args.b)
    m = compare(a, b)
    print(format_metrics(m))
    if args.json:
        Path(args.json).write_text(json.dumps(
            {"a": str(args.a), "b": str(args.b), "ssim": m.ssim, "mad": m.mad, "sad": m.sad},
            sort_keys=True) + "\n")
    return EXIT_OK


def discover(dataset_dir):
    """``<name>.png`` groups with ``<name>_trimap.png`` and optional alpha0/conf maps."""
    root = Path(dataset_dir)
    if not root.is_dir():
        raise OSError(f"{root} is not a directory")
    groups = []
    for trimap in sorted(root.glob("*_trimap.png")):
        name = trimap.name[: -len("_trimap.png")]
        image = root / f"{name}.png"
        if not image.exists():
            continue
        alpha0, conf = root / f"{name}_alpha0.png", root / f"{name}_conf.png"
        if alpha0.exists() and conf.exists():
            groups.append((name, image, trimap, alpha0, conf))
        else:
            groups.append((name, image, trimap, None, None))
    return groups


def bench(dataset_dir, out_dir, config, comparisons=COMPARISONS):
    """Run every comparison on every image; returns {comparison: [(name, MatteMetrics)]}."""
    groups = discover(dataset_dir)
    if not groups:
        raise OSError(f"no <name>.png + <name>_trimap.png pairs in {dataset_dir}")
    beta_cfg = config if config.method != "closed-form" else replace(config, method="beta-5point")
    results = {c: [] for c in comparisons}
    for name, image, trimap, alpha0, conf in groups:
        level = load_inputs(image, trimap, alpha0, conf, config.conf_scale)
        _, full = run_matte(level, beta_cfg, scale=1)
        if "cf-vs-beta" in comparisons:
            cf_cfg = replace(beta_cfg, method="closed-form", scale=1)
            _, cf = run_matte(level, cf_cfg, scale=1)
            results["cf-vs-beta"].append((name, compare(cf, full)))
        for cmp, factor in (("half", 2), ("quarter", 4)):
            if cmp in comparisons:
                _, coarse = run_matte(level, beta_cfg, scale=factor)
                results[cmp].append((name, compare(full, coarse)))
        log.info("benchmarked %s", name)
    write_reports(out_dir, results)
    return results


def write_reports(out_dir, results):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for cmp, rows in results.items():
        vals = np.array([[m.ssim, m.mad, m.sad] for _, m in rows])
        mean = vals.mean(axis=0)
        with open(out / f"bench_{cmp}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["image", "ssim", "mad", "sad"])
            for name, m in rows:
                writer.writerow([name, repr(m.ssim), repr(m.mad), repr(m.sad)])
            writer.writerow(["mean"] + [repr(float(v)) for v in mean])
        std = vals.std(axis=0)
        summary.append((cmp, len(rows), mean[0], std[0], mean[2], std[2], mean[1], std[1]))

    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["comparison", "n", "ssim_mean", "ssim_std", "sad_mean", "sad_std",
                         "mad_mean", "mad_std"])
        for row in summary:
            writer.writerow([row[0], row[1]] + [repr(float(v)) for v in row[2:]])

    lines = ["| comparison | SSIM mean | SSIM std | SAD mean | SAD std |",
             "|---|---|---|---|---|"]
    for cmp, _, sm, ss, am, as_, *_ in summary:
        lines.append(f"| {cmp} | {sm:.4f} | {ss:.4f} | {am:.4f} | {as_:.4f} |")
    (out / "summary.md").write_text("\n".join(lines) + "\n")


def cmd_bench(args):
    config = _config_from_args(args)
    comparisons = tuple(c.strip() for c in args.comparisons.split(",") if c.strip())
    bad = set(comparisons) - set(COMPARISONS)
    if bad or not comparisons:
        raise UsageError(f"--comparisons must be a subset of {','.join(COMPARISONS)}")
    bench(args.dataset, args.out_dir, config, comparisons)
    print((Path(args.out_dir) / "summary.md").read_text(), end="")
    return EXIT_OK


def _add_solver_flags(p):
    p.add_argument("--method", choices=METHODS, default="beta-5point")
    p.add_argument("--radius", type=int, default=1, help="window radius for beta-window / closed-form")
    p.add_argument("--eps-s", type=float, default=1e-4, help="isotropic spatial prior on X X^T")
    p.add_argument("--sigma-s", type=float, default=1.0,
                   help="Gaussian smoothing of X X^T; 0 disables smoothing")
    p.add_argument("--eps-cf", type=float, default=1e-7, help="closed-form regulariser")
    p.add_argument("--lambda", dest="lambda_known", type=float, default=100.0,
                   help="confidence of trimap-known pixels")
    p.add_argument("--conf-scale", type=float, default=100.0,
                   help="confidence map value 1.0 maps to this lambda")
    p.add_argument("--scale", type=int, default=1, choices=(1, 2, 4),
                   help="solve beta at 1/scale resolution")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=None)


def build_parser():
    parser = _Parser(prog="betamatte", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("matte", help="pull an alpha matte")
    p.add_argument("--image", required=True)
    p.add_argument("--trimap", required=True)
    p.add_argument("--alpha0")
    p.add_argument("--confidence")
    _add_solver_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--out-beta", help="write the beta field as BETAF32")
    p.add_argument("--out-preview", help="prefix for per-channel beta previews (v/5 + 0.5)")
    p.add_argument("--bits", type=int, choices=(8, 16), default=8)
    p.set_defaults(func=cmd_matte)

    p = sub.add_parser("compare", help="SSIM / MAD / SAD between two alpha maps")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", help="also write the metrics as a JSON record")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="benchmark a directory of matting inputs")
    p.add_argument("dataset")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--comparisons", default=",".join(COMPARISONS))
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"betamatte: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, SingularSystemError) as exc:
        print(f"betamatte: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (OSError, ValueError) as exc:
        print(f"betamatte: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
