"""Benchmark harness: reconstruction error under gradient perturbations and
solver wall-time scaling.

RMSE benchmarks pit the spectral solver against a fixed-budget iterative
competitor on thresholded gradient fields; timing benchmarks check that the
solve cost grows like n log n.  Measurements are taken serially, interleaved
across problem sizes, with medians over several rounds to shrug off scheduler
noise.
"""

from __future__ import annotations

import csv
import gc
import math
import time
from dataclasses import dataclass

import numpy as np

from .diffops import divergence_periodic, gradient, gradient_periodic
from .editing import threshold_gradient
from .fields import as_field, pad_zero
from .oracle import field_rmse, jacobi_solve
from .solver import SolveOptions, solve_laplacian, solve_batch, solve_gradient
from .spectral import cached_green_spectrum

__all__ = [
    "BenchRecord",
    "METHODS",
    "perturbation_benchmark",
    "timing_scaling",
    "scaling_ratios",
    "parallel_batch_times",
    "write_csv",
    "CSV_HEADER",
]

CSV_HEADER = ("method", "image_id", "threshold_fraction", "rmse", "wall_time_s", "pixels")

JACOBI_ITERATIONS = 500


@dataclass(frozen=True)
class BenchRecord:
    method: str
    image_id: str
    threshold_fraction: float
    rmse: float
    wall_time_s: float
    pixels: int

    def __post_init__(self) -> None:
        if self.rmse < 0:
            raise ValueError("rmse must be non-negative")
        if self.wall_time_s <= 0:
            raise ValueError("wall time must be positive")


def _solve_gfc(ep, opts: SolveOptions) -> np.ndarray:
    sol, _ = solve_gradient(ep, opts)
    return sol


def _solve_jacobi(ep, opts: SolveOptions) -> np.ndarray:
    return jacobi_solve(divergence_periodic(ep), iterations=JACOBI_ITERATIONS)


METHODS = {"gfc": _solve_gfc, "jacobi500": _solve_jacobi}


def perturbation_benchmark(images, fractions, methods=("gfc", "jacobi500"),
                           opts: SolveOptions = SolveOptions(), max_level: float = 255.0,
                           image_ids=None) -> list[BenchRecord]:
    """Measure gradient-reconstruction RMSE after thresholding perturbations.

    For every image, fraction and method: threshold the padded image's
    gradient at ``fraction * max_level``, solve the perturbed field back to a
    potential, re-differentiate, and record the RMSE between that gradient
    and the perturbed field, plus the solve wall time.
    """
    images = [as_field(im) for im in images]
    if not images:
        raise ValueError("need at least one image")
    for name in methods:
        if name not in METHODS:
            raise ValueError(f"unknown method {name!r}; known: {sorted(METHODS)}")
    if image_ids is None:
        image_ids = [f"img{i:03d}" for i in range(len(images))]
    records = []
    for image_id, image in zip(image_ids, images):
        padded = pad_zero(image, opts.pad)
        e = gradient(padded)
        for fraction in fractions:
            ep = threshold_gradient(e, fraction, max_level)
            for name in methods:
                t0 = time.perf_counter()
                potential = METHODS[name](ep, opts)
                wall = time.perf_counter() - t0
                ec = gradient_periodic(potential)
                records.append(BenchRecord(
                    method=name,
                    image_id=str(image_id),
                    threshold_fraction=float(fraction),
                    rmse=field_rmse(ec, ep),
                    wall_time_s=max(wall, 1e-9),
                    pixels=padded.size,
                ))
    return records


def _grid_shape(pixels: int) -> tuple[int, int]:
    side = math.isqrt(pixels)
    while side > 1 and pixels % side:
        side -= 1
    return side, pixels // side


def timing_scaling(sizes, runs: int = 9, opts: SolveOptions = SolveOptions(),
                   dtype=np.float64, seed: int = 0) -> list[BenchRecord]:
    """Median solve wall time per pixel count, spectra prebuilt.

    ``sizes`` must be ascending pixel counts.  Rounds are interleaved across
    sizes so slow system drift hits every size equally; the per-size spectrum
    is built (and excluded from timing) up front.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    if runs < 5:
        raise ValueError("need at least 5 runs for a stable median")
    rng = np.random.default_rng(seed)
    problems = {}
    for n in sizes:
        h, w = _grid_shape(n)
        lap = rng.standard_normal((h, w)).astype(dtype)
        lap -= lap.mean()
        cached_green_spectrum(h, w, dtype=dtype)
        solve_laplacian(lap, opts)  # warm the transform plans
        solve_laplacian(lap, opts)
        problems[n] = lap
    times: dict[int, list[float]] = {n: [] for n in sizes}
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(runs):
            for n in sizes:
                lap = problems[n]
                t0 = time.perf_counter()
                solve_laplacian(lap, opts)
                times[n].append(time.perf_counter() - t0)
    finally:
        if gc_was_enabled:
            gc.enable()
    records = []
    for n in sizes:
        h, w = _grid_shape(n)
        records.append(BenchRecord(
            method="gfc",
            image_id=f"{h}x{w}",
            threshold_fraction=0.0,
            rmse=0.0,
            wall_time_s=float(np.median(times[n])),
            pixels=n,
        ))
    return records


def scaling_ratios(records) -> list[tuple[int, int, float]]:
    """(n, 4n, t(4n)/t(n)) for every quadrupling present in ``records``."""
    by_pixels = {r.pixels: r.wall_time_s for r in records}
    out = []
    for n in sorted(by_pixels):
        if 4 * n in by_pixels:
            out.append((n, 4 * n, by_pixels[4 * n] / by_pixels[n]))
    return out


def parallel_batch_times(pixels: int, k: int = 8, opts: SolveOptions = SolveOptions(),
                         workers: int | None = None, dtype=np.float64,
                         seed: int = 0) -> tuple[float, float]:
    """(serial, batched) wall time for ``k`` independent same-size solves."""
    rng = np.random.default_rng(seed)
    h, w = _grid_shape(pixels)
    laps = [rng.standard_normal((h, w)).astype(dtype) for _ in range(k)]
    cached_green_spectrum(h, w, dtype=dtype)
    solve_laplacian(laps[0], opts)
    solve_batch(laps, opts, workers=workers)
    t0 = time.perf_counter()
    for lap in laps:
        solve_laplacian(lap, opts)
    serial = time.perf_counter() - t0
    t0 = time.perf_counter()
    solve_batch(laps, opts, workers=workers)
    batched = time.perf_counter() - t0
    return serial, batched


def write_csv(records, path) -> None:
    """Emit benchmark records with the stable header, one row per record."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([
                r.method, r.image_id, f"{r.threshold_fraction:g}",
                f"{r.rmse:.12g}", f"{r.wall_time_s:.6g}", r.pixels,
            ])
