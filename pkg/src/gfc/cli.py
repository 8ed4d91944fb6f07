"""Command-line front end.

Grammar: ``gfc <roundtrip|threshold|gdm|blend|bench> [flags]``.  Exit codes
are a stable contract: 0 success, 2 usage or validation problems (bad flags,
missing or mismatched files), 1 internal errors.  Set GFC_THREADS to cap
worker threads.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bench as benchmod
from . import image_io
from .diffops import gradient
from .editing import BlendJob, EdgeMap, MergeEdit, MergeParams, ThresholdEdit, gdie_pipeline, poisson_blend
from .fields import MultiChannelImage
from .solver import SolveOptions, roundtrip_check

__all__ = ["main"]

ROUNDTRIP_RMSE_LIMIT = 0.05
BENCH_FRACTIONS = (0.1, 0.3, 0.5)
SCALING_SIZES = (2**18, 2**20, 2**22)
SCALING_RATIO_LIMIT = 5.5


class CliError(Exception):
    """Validation failure that should exit with status 2."""


def _dtype(precision: str):
    return np.float32 if precision == "f32" else np.float64


def _solve_options(args) -> SolveOptions:
    try:
        return SolveOptions(pad=args.pad)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _load_image(path, precision) -> MultiChannelImage:
    try:
        return image_io.read_image(path, dtype=_dtype(precision))
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise CliError(f"{name} must be in [0, 1], got {value}")
    return value


def _gradient_energy(image: MultiChannelImage) -> float:
    total = 0.0
    for ch in image.channels:
        e = gradient(ch)
        total += float(np.sum(e.ex**2) + np.sum(e.ey**2))
    return float(np.sqrt(total))


def cmd_roundtrip(args) -> int:
    image = _load_image(args.input, args.precision)
    opts = _solve_options(args)
    worst = 0.0
    for idx, ch in enumerate(image.channels):
        rmse = roundtrip_check(ch, opts)
        worst = max(worst, rmse)
        print(f"channel {idx} rmse={rmse:.6f}")
    return 0 if worst <= ROUNDTRIP_RMSE_LIMIT else 1


def cmd_threshold(args) -> int:
    fraction = _check_unit("fraction", args.fraction)
    image = _load_image(args.input, args.precision)
    opts = _solve_options(args)
    out = gdie_pipeline(image, ThresholdEdit(fraction), opts)
    ratio = _gradient_energy(out) / max(_gradient_energy(image), 1e-30)
    print(f"gradient energy ratio out/in: {ratio:.4f}")
    image_io.write_image(args.out, out)
    print(f"wrote {args.out}")
    return 0


def cmd_gdm(args) -> int:
    alpha = _check_unit("alpha", args.alpha)
    if args.sigma <= 0:
        raise CliError(f"sigma must be positive, got {args.sigma}")
    image = _load_image(args.input, args.precision)
    try:
        edge_values = image_io.read_gray(args.edges, dtype=_dtype(args.precision))
    except (FileNotFoundError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    if edge_values.shape != image.shape:
        raise CliError(
            f"edge map shape {edge_values.shape} does not match image shape {image.shape}"
        )
    edit = MergeEdit(EdgeMap.from_raw(edge_values),
                     MergeParams(alpha=alpha, thin_edges=args.thin, blur_sigma=args.sigma))
    opts = _solve_options(args)
    out = gdie_pipeline(image, edit, opts)
    ratio = _gradient_energy(out) / max(_gradient_energy(image), 1e-30)
    print(f"gradient energy ratio out/in: {ratio:.4f}")
    image_io.write_image(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _parse_offset(text: str) -> tuple[int, int]:
    try:
        r, c = text.split(",")
        return int(r), int(c)
    except ValueError as exc:
        raise CliError(f"offset must be 'row,col', got {text!r}") from exc


def cmd_blend(args) -> int:
    source = _load_image(args.source, args.precision)
    dest = _load_image(args.dest, args.precision)
    try:
        mask_gray = image_io.read_gray(args.mask, dtype=np.float64)
    except (FileNotFoundError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    peak = float(mask_gray.max())
    if peak > 0:
        mask = (mask_gray >= 0.5 * peak).astype(np.float64)
    else:
        mask = np.zeros_like(mask_gray)
    offset = _parse_offset(args.offset)
    opts = _solve_options(args)
    try:
        job = BlendJob(source=source, destination=dest, mask=mask, offset=offset)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = poisson_blend(job, opts)
    image_io.write_image(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _bench_workers() -> int:
    env = os.environ.get("GFC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_bench(args) -> int:
    directory = Path(args.images)
    if not directory.is_dir():
        raise CliError(f"not a directory: {directory}")
    files = sorted(
        p for p in directory.iterdir()
        if p.suffix.lower() in (".png", ".pgm", ".ppm", ".gfcf")
    )
    if not files:
        raise CliError(f"no readable images in {directory}")
    opts = _solve_options(args)
    if args.mode == "rmse":
        # files load concurrently (GFC_THREADS caps it); the measured solves
        # themselves stay serial so the recorded timings are honest
        with ThreadPoolExecutor(max_workers=min(_bench_workers(), len(files))) as pool:
            images = list(pool.map(
                lambda p: image_io.read_gray(p, dtype=_dtype(args.precision)), files
            ))
        records = benchmod.perturbation_benchmark(
            images, BENCH_FRACTIONS, opts=opts, image_ids=[p.name for p in files]
        )
        benchmod.write_csv(records, args.out)
        print(f"wrote {len(records)} records to {args.out}")
        return 0
    records = benchmod.timing_scaling(SCALING_SIZES, runs=15, opts=opts,
                                      dtype=_dtype(args.precision))
    benchmod.write_csv(records, args.out)
    ok = True
    for n, n4, ratio in benchmod.scaling_ratios(records):
        verdict = "PASS" if ratio <= SCALING_RATIO_LIMIT else "FAIL"
        ok = ok and ratio <= SCALING_RATIO_LIMIT
        print(f"t({n4})/t({n}) = {ratio:.2f}  [{verdict} vs {SCALING_RATIO_LIMIT}]")
    print(f"wrote {len(records)} records to {args.out}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfc",
        description="Gradient-domain image editing via spectral Poisson solves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--pad", type=int, default=4, help="zero-padding width (default 4)")
        p.add_argument("--precision", choices=("f32", "f64"), default="f64")

    p = sub.add_parser("roundtrip", help="differentiate and solve back, report RMSE")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("threshold", help="suppress weak gradients and re-solve")
    p.add_argument("input")
    p.add_argument("--fraction", type=float, default=0.1,
                   help="threshold as a fraction of the strongest possible gradient")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("gdm", help="merge the gradient with an edge-confidence map")
    p.add_argument("input")
    p.add_argument("--edges", required=True, help="edge map image at input resolution")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--thin", action="store_true",
                   help="painting mode for thinned edge maps (pre-blur the gradient)")
    p.add_argument("--sigma", type=float, default=1.0, help="blur sigma for --thin")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_gdm)

    p = sub.add_parser("blend", help="seamlessly clone a source into a destination")
    p.add_argument("--source", required=True)
    p.add_argument("--dest", required=True)
    p.add_argument("--mask", required=True, help="binary mask at destination size")
    p.add_argument("--offset", default="0,0", help="row,col of source in destination")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_blend)

    p = sub.add_parser("bench", help="RMSE and timing benchmarks, CSV output")
    p.add_argument("images", help="directory of input images")
    p.add_argument("--mode", choices=("rmse", "timing"), default="rmse")
    p.add_argument("--out", required=True, help="CSV output path")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"gfc: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - stable exit-code contract
        print(f"gfc: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
