"""Grid containers and basic field utilities shared by every other module.

A scalar field is a plain 2D float ndarray (row-major, ``shape == (height,
width)``); gray levels for images, gray levels/pixel for gradient components,
gray levels/pixel^2 for Laplacians.  All operations are pure: inputs are never
mutated, outputs are freshly allocated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "FieldStats",
    "VectorField",
    "MultiChannelImage",
    "as_field",
    "pad_zero",
    "crop_pad",
    "stats",
]


class FieldStats(NamedTuple):
    """Mean and population (divide-by-N) standard deviation, in gray levels."""

    mean: float
    std: float


class VectorField(NamedTuple):
    """Pair of same-shape scalar fields: x- and y-components of a gradient."""

    ex: np.ndarray
    ey: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.ex.shape


def _check_pair(e: VectorField) -> None:
    if e.ex.shape != e.ey.shape:
        raise ValueError(f"component shape mismatch: {e.ex.shape} vs {e.ey.shape}")


@dataclass(frozen=True)
class MultiChannelImage:
    """One or three same-shape channels plus the nominal value range."""

    channels: tuple[np.ndarray, ...]
    vmin: float = 0.0
    vmax: float = 255.0

    def __post_init__(self) -> None:
        chans = tuple(as_field(c) for c in self.channels)
        object.__setattr__(self, "channels", chans)
        if len(chans) not in (1, 3):
            raise ValueError(f"expected 1 or 3 channels, got {len(chans)}")
        if any(c.shape != chans[0].shape for c in chans):
            raise ValueError("all channels must share the same dimensions")

    @property
    def shape(self) -> tuple[int, int]:
        return self.channels[0].shape

    def map(self, fn) -> "MultiChannelImage":
        """Apply ``fn`` to every channel, keeping the value-range metadata."""
        return MultiChannelImage(tuple(fn(c) for c in self.channels), self.vmin, self.vmax)


def as_field(a, dtype=None) -> np.ndarray:
    """Coerce ``a`` to a 2D float ndarray (no copy when already conforming)."""
    f = np.asarray(a, dtype=dtype)
    if f.ndim != 2:
        raise ValueError(f"scalar field must be 2D, got shape {f.shape}")
    if f.shape[0] < 1 or f.shape[1] < 1:
        raise ValueError(f"scalar field must be at least 1x1, got {f.shape}")
    if not np.issubdtype(f.dtype, np.floating):
        f = f.astype(np.float64)
    return f


def pad_zero(f, pad: int) -> np.ndarray:
    """Surround ``f`` with a ``pad``-wide ring of exact zeros."""
    f = as_field(f)
    if pad < 0:
        raise ValueError(f"pad must be non-negative, got {pad}")
    if pad == 0:
        return f.copy()
    return np.pad(f, pad, mode="constant", constant_values=0)


def crop_pad(f, pad: int) -> np.ndarray:
    """Return the centered interior, undoing :func:`pad_zero` bit-exactly."""
    f = as_field(f)
    if pad < 0:
        raise ValueError(f"pad must be non-negative, got {pad}")
    h, w = f.shape
    if h <= 2 * pad or w <= 2 * pad:
        raise ValueError(f"field of shape {f.shape} has no interior for pad={pad}")
    if pad == 0:
        return f.copy()
    return f[pad:-pad, pad:-pad].copy()


def stats(f) -> FieldStats:
    """Mean and population standard deviation over all pixels."""
    f = as_field(f)
    mean = float(np.mean(f, dtype=np.float64))
    std = float(np.sqrt(np.mean((f.astype(np.float64) - mean) ** 2)))
    return FieldStats(mean=mean, std=std)
