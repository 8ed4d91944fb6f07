"""Discrete differential operators on regular grids.

The gradient uses forward differences and the divergence backward differences,
both with a zero exterior.  That pairing is deliberate: their composition is
exactly the 5-point Laplacian stencil wherever the input's first row and
column are zero (always true after :func:`gfc.fields.pad_zero`), so a field
produced by :func:`gradient` turns back into the matching Laplacian with no
discretization bias.  On an arbitrary unpadded field the composition differs
from the stencil along the first row/column only, because the one-sided
boundary samples the backward difference would need fall outside the grid.

Periodic (wrap-around) variants are provided for work on the padded torus,
where the spectral solver lives.  On any field whose outer ring is zero the
two families coincide.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import convolve1d

from .fields import VectorField, as_field, _check_pair

__all__ = [
    "LAPLACE_KERNEL",
    "gradient",
    "divergence",
    "laplacian",
    "gradient_periodic",
    "divergence_periodic",
    "laplacian_periodic",
    "magnitude_orientation",
    "recompose",
    "gaussian_blur",
]

# 5-point stencil with a -4 center so that laplacian == divergence(gradient).
LAPLACE_KERNEL = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])
LAPLACE_KERNEL.setflags(write=False)


def gradient(i) -> VectorField:
    """Forward-difference gradient with zero exterior.

    ``ex[r, c] = i[r, c+1] - i[r, c]`` (values beyond the last column read as
    0) and likewise ``ey`` along rows.
    """
    i = as_field(i)
    ex = np.empty_like(i)
    ex[:, :-1] = i[:, 1:] - i[:, :-1]
    ex[:, -1] = -i[:, -1]
    ey = np.empty_like(i)
    ey[:-1, :] = i[1:, :] - i[:-1, :]
    ey[-1, :] = -i[-1, :]
    return VectorField(ex, ey)


def divergence(e: VectorField) -> np.ndarray:
    """Backward-difference divergence with zero exterior (adjoint pairing)."""
    _check_pair(e)
    ex, ey = as_field(e.ex), as_field(e.ey)
    div = ex + ey
    div[:, 1:] -= ex[:, :-1]
    div[1:, :] -= ey[:-1, :]
    return div


def laplacian(i) -> np.ndarray:
    """Convolution with the 5-point stencil under zero extension."""
    i = as_field(i)
    out = -4.0 * i
    out[:, :-1] += i[:, 1:]
    out[:, 1:] += i[:, :-1]
    out[:-1, :] += i[1:, :]
    out[1:, :] += i[:-1, :]
    return out


def gradient_periodic(i) -> VectorField:
    """Forward-difference gradient with wrap-around (torus) boundaries."""
    i = as_field(i)
    return VectorField(np.roll(i, -1, axis=1) - i, np.roll(i, -1, axis=0) - i)


def divergence_periodic(e: VectorField) -> np.ndarray:
    """Backward-difference divergence with wrap-around boundaries."""
    _check_pair(e)
    ex, ey = as_field(e.ex), as_field(e.ey)
    return ex - np.roll(ex, 1, axis=1) + ey - np.roll(ey, 1, axis=0)


def laplacian_periodic(i) -> np.ndarray:
    """5-point stencil with wrap-around boundaries."""
    i = as_field(i)
    return (
        np.roll(i, 1, axis=0)
        + np.roll(i, -1, axis=0)
        + np.roll(i, 1, axis=1)
        + np.roll(i, -1, axis=1)
        - 4.0 * i
    )


def magnitude_orientation(e: VectorField) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel polar decomposition ``(|E|, atan2(ey, ex))``.

    Zero-magnitude pixels get orientation 0 by convention.
    """
    _check_pair(e)
    mag = np.hypot(e.ex, e.ey)
    theta = np.arctan2(e.ey, e.ex)
    theta = np.where(mag > 0, theta, 0.0)
    return mag, theta


def recompose(mag, theta) -> VectorField:
    """Inverse of :func:`magnitude_orientation`."""
    mag = as_field(mag)
    theta = as_field(theta)
    if mag.shape != theta.shape:
        raise ValueError(f"shape mismatch: {mag.shape} vs {theta.shape}")
    return VectorField(mag * np.cos(theta), mag * np.sin(theta))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1D Gaussian of radius ceil(3*sigma), renormalized to sum 1."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_blur(f, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel truncated at 3*sigma, zero extension."""
    f = as_field(f)
    k = gaussian_kernel(sigma).astype(f.dtype, copy=False)
    out = convolve1d(f, k, axis=0, mode="constant", cval=0.0)
    return convolve1d(out, k, axis=1, mode="constant", cval=0.0)
