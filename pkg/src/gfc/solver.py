"""Reconstruct an image from its Laplacian or (possibly non-conservative)
gradient with one spectral convolution.

Solves are exact on the padded torus: differentiation followed by a solve
returns the padded image bit-for-bit up to FFT roundoff, and for a
non-integrable field the result is the orthogonal projection onto
conservative fields, i.e. the least-gradient-error reconstruction.  The
convolution drops the mean (zero-frequency bin), so each solve ends by adding
an integration constant fixed by an anchor rule.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from . import spectral
from .diffops import divergence_periodic, laplacian
from .fields import VectorField, as_field, crop_pad, pad_zero, _check_pair

__all__ = [
    "SolveOptions",
    "SolveReport",
    "solve_laplacian",
    "solve_gradient",
    "solve_batch",
    "roundtrip_check",
]

ANCHORS = ("ring-mean", "top-left")
PATHS = ("monopole", "dipole")


@dataclass(frozen=True)
class SolveOptions:
    """How to pad, anchor and route a solve.

    ``anchor="ring-mean"`` picks the constant that zeroes the mean of the
    ``pad``-wide outer ring (the padded region of the input was zero, so the
    reconstruction's ring should be too); ``"top-left"`` subtracts the single
    corner sample instead.  ``path`` selects the one-convolution Laplacian
    route or the equivalent two-convolution per-axis route.
    """

    pad: int = 4
    anchor: str = "ring-mean"
    path: str = "monopole"

    def __post_init__(self) -> None:
        if self.pad < 0:
            raise ValueError(f"pad must be non-negative, got {self.pad}")
        if self.anchor not in ANCHORS:
            raise ValueError(f"anchor must be one of {ANCHORS}, got {self.anchor!r}")
        if self.path not in PATHS:
            raise ValueError(f"path must be one of {PATHS}, got {self.path!r}")
        if self.anchor == "ring-mean" and self.pad < 1:
            raise ValueError("ring-mean anchoring needs pad >= 1")


@dataclass(frozen=True)
class SolveReport:
    constant_applied: float
    padded_size: tuple[int, int]
    zeroed_bins: int


def _ring_mean(f: np.ndarray, pad: int) -> float:
    h, w = f.shape
    if h <= 2 * pad or w <= 2 * pad:
        return float(np.mean(f, dtype=np.float64))
    top = f[:pad, :]
    bottom = f[h - pad:, :]
    left = f[pad:h - pad, :pad]
    right = f[pad:h - pad, w - pad:]
    total = (top.sum(dtype=np.float64) + bottom.sum(dtype=np.float64)
             + left.sum(dtype=np.float64) + right.sum(dtype=np.float64))
    count = top.size + bottom.size + left.size + right.size
    return float(total / count)


def _anchor_constant(raw: np.ndarray, opts: SolveOptions) -> float:
    if opts.anchor == "top-left":
        return -float(raw[0, 0])
    return -_ring_mean(raw, opts.pad)


def solve_laplacian(lap, opts: SolveOptions = SolveOptions()) -> tuple[np.ndarray, SolveReport]:
    """Solve ``laplacian(I) = lap`` on the grid the Laplacian lives on.

    ``lap`` must already be the Laplacian of a pad-extended image; the caller
    pads before differentiating and crops the returned (padded) solution.
    """
    lap = as_field(lap)
    green = spectral.cached_green_spectrum(*lap.shape, dtype=lap.dtype)
    raw = spectral.convolve_spectral(lap, green)
    c = _anchor_constant(raw, opts)
    raw += c  # freshly allocated by the inverse transform, safe to reuse
    return raw, SolveReport(c, lap.shape, green.zeroed_bins)


def solve_gradient(e: VectorField, opts: SolveOptions = SolveOptions()) -> tuple[np.ndarray, SolveReport]:
    """Best conservative reconstruction of a (possibly perturbed) gradient.

    The monopole path differentiates once more (circular backward
    differences, the torus adjoint of the forward-difference gradient) and
    solves the resulting Laplacian; the dipole path convolves each component
    with its own per-axis multiplier.  Both compute the same projection.
    """
    _check_pair(e)
    ex, ey = as_field(e.ex), as_field(e.ey)
    if opts.path == "dipole":
        dip = spectral.cached_dipole_spectra(*ex.shape, dtype=ex.dtype)
        w = ex.shape[1]
        half = slice(0, w // 2 + 1)
        spec = sfft.rfft2(ex)
        np.multiply(spec, dip.vx[:, half], out=spec)
        spec += sfft.rfft2(ey) * dip.vy[:, half]
        raw = sfft.irfft2(spec, s=ex.shape, overwrite_x=True)
        c = _anchor_constant(raw, opts)
        raw += c
        return raw, SolveReport(c, ex.shape, dip.zeroed_bins)
    return solve_laplacian(divergence_periodic(VectorField(ex, ey)), opts)


def _max_workers() -> int:
    env = os.environ.get("GFC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def solve_batch(laps, opts: SolveOptions = SolveOptions(), workers: int | None = None):
    """Solve many independent Laplacians, using all cores when shapes match.

    Same-shape batches go through one stacked transform pair with native
    multithreading; mixed shapes fall back to a thread pool.  Results are
    ordered like the input regardless.
    """
    laps = [as_field(l) for l in laps]
    if not laps:
        return []
    if workers is None:
        workers = _max_workers()
    shape = laps[0].shape
    if all(l.shape == shape for l in laps) and len(laps) > 1:
        green = spectral.cached_green_spectrum(*shape, dtype=laps[0].dtype)
        stack = np.stack(laps)
        spec = sfft.rfft2(stack, axes=(-2, -1), workers=workers)
        np.multiply(spec, green.half_spectrum, out=spec)
        raw = sfft.irfft2(spec, s=shape, axes=(-2, -1), workers=workers, overwrite_x=True)
        out = []
        for sol in raw:
            c = _anchor_constant(sol, opts)
            out.append((sol + c, SolveReport(c, shape, green.zeroed_bins)))
        return out
    if workers == 1 or len(laps) == 1:
        return [solve_laplacian(l, opts) for l in laps]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda l: solve_laplacian(l, opts), laps))


def roundtrip_check(i, opts: SolveOptions = SolveOptions()) -> float:
    """RMSE between ``i`` and its pad -> laplacian -> solve -> crop image."""
    i = as_field(i)
    padded = pad_zero(i, opts.pad)
    sol, _ = solve_laplacian(laplacian(padded), opts)
    rec = crop_pad(sol, opts.pad) if opts.pad else sol
    return float(np.sqrt(np.mean((rec - i) ** 2, dtype=np.float64)))
