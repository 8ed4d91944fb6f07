"""Gradient-domain editing built on the spectral solver.

Every application follows the same loop: pad the image, move to the gradient
domain, perturb the field there (threshold, merge with an edge map, splice in
another image's gradients), solve back, and restore brightness/contrast with
a statistics-matching correction.  Internal math is unclamped; clipping to
the nominal range happens only at pipeline exit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffops import divergence, gaussian_blur, gradient
from .fields import MultiChannelImage, VectorField, as_field, crop_pad, pad_zero, _check_pair
from .solver import SolveOptions, solve_gradient, solve_laplacian

__all__ = [
    "MergeParams",
    "EdgeMap",
    "BlendJob",
    "ThresholdEdit",
    "MergeEdit",
    "color_correct",
    "threshold_gradient",
    "gdm_merge",
    "poisson_blend",
    "gdie_pipeline",
]


@dataclass(frozen=True)
class MergeParams:
    """Weights for gradient/edge merging.

    ``alpha`` balances the geometric mean (0 keeps the gradient untouched, 1
    replaces its magnitude with the edge confidence).  ``thin_edges`` enables
    the painting mode for NMS-thinned edge maps, where the gradient is
    thickened by a Gaussian of ``blur_sigma`` before merging.
    """

    alpha: float = 0.5
    thin_edges: bool = False
    blur_sigma: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.blur_sigma <= 0:
            raise ValueError(f"blur_sigma must be positive, got {self.blur_sigma}")


@dataclass(frozen=True)
class EdgeMap:
    """Per-pixel edge confidence in [0, 1]."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = as_field(self.values)
        if v.size and (v.min() < 0.0 or v.max() > 1.0):
            raise ValueError("edge confidence values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_raw(cls, values) -> "EdgeMap":
        """Ingest a detector output of any range, rescaled to [0, 1]."""
        v = as_field(values).astype(np.float64)
        lo, hi = float(v.min()), float(v.max())
        if hi > lo:
            v = (v - lo) / (hi - lo)
        else:
            v = np.zeros_like(v)
        return cls(v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class BlendJob:
    """Placement of a source image into a destination via a binary mask.

    ``mask`` lives at destination size with 1 marking pixels to fill from the
    source's gradients; ``offset`` is the (row, col) of the source's top-left
    corner in the destination frame.  Every mask-1 pixel must be covered by
    the translated source.
    """

    source: MultiChannelImage
    destination: MultiChannelImage
    mask: np.ndarray
    offset: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        mask = as_field(self.mask)
        object.__setattr__(self, "mask", mask)
        if mask.shape != self.destination.shape:
            raise ValueError(
                f"mask shape {mask.shape} != destination shape {self.destination.shape}"
            )
        if not np.all((mask == 0) | (mask == 1)):
            raise ValueError("mask must be binary (0/1)")
        if len(self.source.channels) != len(self.destination.channels):
            raise ValueError("source and destination must have the same channel count")
        hs, ws = self.source.shape
        r0, c0 = self.offset
        rows, cols = np.nonzero(mask)
        if rows.size:
            inside = (rows >= r0) & (rows < r0 + hs) & (cols >= c0) & (cols < c0 + ws)
            if not inside.all():
                raise ValueError("translated source does not cover every mask-1 pixel")


@dataclass(frozen=True)
class ThresholdEdit:
    """Zero out every gradient below a fraction of the strongest possible."""

    fraction: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")


@dataclass(frozen=True)
class MergeEdit:
    """Merge the gradient with an edge-confidence map."""

    edges: EdgeMap
    params: MergeParams = MergeParams()


def color_correct(ic, reference) -> np.ndarray:
    """Shift and rescale ``ic`` so its mean and deviation match ``reference``.

    Adding a constant never invalidates a solve, and scaling only changes the
    gradient norm by a constant factor, so this restores the original
    brightness and contrast without touching the solution's structure.
    """
    ic = as_field(ic)
    reference = as_field(reference)
    std_ic = float(np.std(ic, dtype=np.float64))
    if std_ic <= 1e-12:
        raise ValueError("degenerate (flat) solution: cannot match contrast")
    mean_ic = float(np.mean(ic, dtype=np.float64))
    std_ref = float(np.std(reference, dtype=np.float64))
    mean_ref = float(np.mean(reference, dtype=np.float64))
    return (ic - mean_ic) * (std_ref / std_ic) + mean_ref


def threshold_gradient(e: VectorField, fraction: float, max_level: float) -> VectorField:
    """Zero both components wherever ``|E| < fraction * max_level``."""
    _check_pair(e)
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    if max_level <= 0:
        raise ValueError(f"max_level must be positive, got {max_level}")
    keep = np.hypot(e.ex, e.ey) >= fraction * max_level
    return VectorField(np.where(keep, e.ex, 0.0), np.where(keep, e.ey, 0.0))


def gdm_merge(e: VectorField, edges: EdgeMap, p: MergeParams) -> VectorField:
    """Blend gradient magnitudes with edge confidence by a geometric mean.

    Magnitudes are normalized by the field maximum ``m`` so they are
    unit-compatible with the confidence map, combined as
    ``m * (|E|/m)**(1-alpha) * C**alpha``, and the original orientation is
    kept.  Zero-magnitude pixels are direction-free and stay (0, 0).
    """
    _check_pair(e)
    if edges.shape != e.shape:
        raise ValueError(f"edge map shape {edges.shape} != field shape {e.shape}")
    if p.alpha == 0.0:
        return VectorField(e.ex.copy(), e.ey.copy())
    mag = np.hypot(e.ex, e.ey)
    m = float(mag.max())
    if m == 0.0:
        return VectorField(e.ex.copy(), e.ey.copy())
    new_mag = m * (mag / m) ** (1.0 - p.alpha) * edges.values ** p.alpha
    scale = np.zeros_like(mag)
    np.divide(new_mag, mag, out=scale, where=mag > 0)
    return VectorField(e.ex * scale, e.ey * scale)


def _place(canvas_shape, tile: np.ndarray, offset: tuple[int, int], dtype) -> np.ndarray:
    """Paste ``tile`` at ``offset`` in a zero canvas, clipping overhang."""
    out = np.zeros(canvas_shape, dtype=dtype)
    h, w = canvas_shape
    th, tw = tile.shape
    r0, c0 = offset
    r_lo, r_hi = max(r0, 0), min(r0 + th, h)
    c_lo, c_hi = max(c0, 0), min(c0 + tw, w)
    if r_lo < r_hi and c_lo < c_hi:
        out[r_lo:r_hi, c_lo:c_hi] = tile[r_lo - r0:r_hi - r0, c_lo - c0:c_hi - c0]
    return out


def poisson_blend(job: BlendJob, opts: SolveOptions = SolveOptions()) -> MultiChannelImage:
    """Seamlessly clone the source into the destination through gradients.

    Per channel: both images are placed on the zero-padded canvas, their
    gradients are taken there, the mask picks source samples inside and
    destination samples outside, and the spliced field is solved.  The
    integration constant is the least-squares match to the destination over
    mask-0 pixels (or to the source when the mask covers everything), then
    the result is clipped to the nominal range.
    """
    dest = job.destination
    mask = job.mask
    pad = opts.pad
    mask_pad = pad_zero(mask, pad)
    sel = mask_pad == 1
    mask0 = mask == 0
    mask1 = ~mask0
    out_channels = []
    for src_ch, dst_ch in zip(job.source.channels, dest.channels):
        d_canvas = pad_zero(dst_ch, pad)
        s_canvas = _place(d_canvas.shape, src_ch,
                          (job.offset[0] + pad, job.offset[1] + pad), d_canvas.dtype)
        gd = gradient(d_canvas)
        gs = gradient(s_canvas)
        ep = VectorField(np.where(sel, gs.ex, gd.ex), np.where(sel, gs.ey, gd.ey))
        sol, _ = solve_gradient(ep, opts)
        rec = crop_pad(sol, pad) if pad else sol
        if mask0.any():
            c = float(np.mean(dst_ch[mask0] - rec[mask0], dtype=np.float64))
        else:
            src_full = _place(dst_ch.shape, src_ch, job.offset, d_canvas.dtype)
            c = float(np.mean(src_full[mask1] - rec[mask1], dtype=np.float64))
        out_channels.append(np.clip(rec + c, dest.vmin, dest.vmax))
    return MultiChannelImage(tuple(out_channels), dest.vmin, dest.vmax)


def _apply_edit(e: VectorField, edit, edges_padded, span: float) -> VectorField:
    if isinstance(edit, ThresholdEdit):
        return threshold_gradient(e, edit.fraction, span)
    if isinstance(edit, MergeEdit):
        if edit.params.thin_edges:
            sigma = edit.params.blur_sigma
            e = VectorField(gaussian_blur(e.ex, sigma), gaussian_blur(e.ey, sigma))
        return gdm_merge(e, edges_padded, edit.params)
    raise TypeError(f"unsupported edit {edit!r}")


def gdie_pipeline(image: MultiChannelImage, edit, opts: SolveOptions = SolveOptions(),
                  clamp: bool = True) -> MultiChannelImage:
    """Full edit loop: pad, differentiate, edit, solve, correct, clip.

    ``edit`` is a :class:`ThresholdEdit` or :class:`MergeEdit`.  Each channel
    is processed independently; the statistics correction is taken against
    that channel of the input.  Pass ``clamp=False`` to inspect the
    unclipped result.
    """
    edges_padded = None
    if isinstance(edit, MergeEdit):
        if edit.edges.shape != image.shape:
            raise ValueError(
                f"edge map shape {edit.edges.shape} != image shape {image.shape}"
            )
        edges_padded = EdgeMap(pad_zero(edit.edges.values, opts.pad))
    span = float(image.vmax - image.vmin)
    out_channels = []
    for ch in image.channels:
        padded = pad_zero(ch, opts.pad)
        ep = _apply_edit(gradient(padded), edit, edges_padded, span)
        sol, _ = solve_laplacian(divergence(ep), opts)
        rec = crop_pad(sol, opts.pad) if opts.pad else sol
        corrected = color_correct(rec, ch)
        if clamp:
            corrected = np.clip(corrected, image.vmin, image.vmax)
        out_channels.append(corrected)
    return MultiChannelImage(tuple(out_channels), image.vmin, image.vmax)
