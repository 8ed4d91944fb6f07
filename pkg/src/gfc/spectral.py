"""Fourier-domain machinery: numerically inverted difference kernels.

The inverse of the 5-point Laplacian stencil on an h-by-w torus is built as
the bin-wise quotient of two transforms, ``F(dirac_grid) / F(laplace_grid)``,
with both small kernels embedded in full-size zero grids.  The quotient is
finite everywhere except the zero-frequency bin (the stencil annihilates
constants); that bin is set to 0, which makes every solve mean-free until an
integration constant is applied.

Transform convention throughout: forward unnormalized, inverse 1/N (the
numpy/scipy default), so products and quotients of spectra need no extra
scale factors.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .fields import as_field

__all__ = [
    "KernelStamp",
    "GreenSpectrum",
    "DipoleSpectra",
    "DIRAC_STAMP",
    "LAPLACE_STAMP",
    "SOBEL_X_STAMP",
    "SOBEL_Y_STAMP",
    "embed_stamp",
    "stamp_spectrum",
    "invert_kernel",
    "build_green_spectrum",
    "build_dipole_spectra",
    "convolve_spectral",
    "cached_green_spectrum",
    "cached_dipole_spectra",
    "clear_spectrum_cache",
]

_COMPLEX_FOR = {np.dtype(np.float32): np.complex64, np.dtype(np.float64): np.complex128}


def complex_dtype_for(dtype) -> np.dtype:
    return np.dtype(_COMPLEX_FOR.get(np.dtype(dtype), np.complex128))


@dataclass(frozen=True)
class KernelStamp:
    """Small convolution stamp with an anchor cell marking its origin."""

    values: np.ndarray
    anchor: tuple[int, int]
    name: str = ""

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("stamp must be a 2D matrix")
        ar, ac = self.anchor
        if not (0 <= ar < v.shape[0] and 0 <= ac < v.shape[1]):
            raise ValueError(f"anchor {self.anchor} outside stamp of shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


DIRAC_STAMP = KernelStamp(np.array([[1.0]]), (0, 0), "dirac")
LAPLACE_STAMP = KernelStamp(
    np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]]), (1, 1), "laplace5"
)
SOBEL_X_STAMP = KernelStamp(
    np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]), (1, 1), "sobel-x"
)
SOBEL_Y_STAMP = KernelStamp(
    np.array([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]), (1, 1), "sobel-y"
)


@dataclass(frozen=True)
class GreenSpectrum:
    """Fourier-domain inverse of a difference stamp for one padded size.

    ``zeroed_bins`` counts the bins where the stamp's transform was too small
    to divide by; anything above 1 means the inversion is lossy (information
    in those bins cannot be recovered).
    """

    spectrum: np.ndarray
    kernel_id: str
    zeroed_bins: int

    @property
    def padded_shape(self) -> tuple[int, int]:
        return self.spectrum.shape

    @property
    def half_spectrum(self) -> np.ndarray:
        """Left half-columns, enough for real-input transforms."""
        w = self.spectrum.shape[1]
        return self.spectrum[:, : w // 2 + 1]


@dataclass(frozen=True)
class DipoleSpectra:
    """Fourier multipliers that solve a gradient pair directly.

    ``vx``/``vy`` are the backward-difference multipliers along each axis
    times the Laplacian's inverse spectrum, so summing the two products
    against a gradient's transforms integrates the field in one pass.
    """

    vx: np.ndarray
    vy: np.ndarray
    zeroed_bins: int

    @property
    def padded_shape(self) -> tuple[int, int]:
        return self.vx.shape


def embed_stamp(stamp: KernelStamp, h: int, w: int, dtype=np.float64) -> np.ndarray:
    """Drop ``stamp`` into an h-by-w zero grid with its anchor at (1, 1).

    The (1, 1) alignment matches the Dirac placement used by the Green's
    function construction; only the *relative* offset between numerator and
    denominator stamps matters, so any common alignment cancels out.
    """
    kh, kw = stamp.values.shape
    if kh > h or kw > w:
        raise ValueError(f"stamp {kh}x{kw} does not fit in {h}x{w} grid")
    grid = np.zeros((h, w), dtype=dtype)
    grid[:kh, :kw] = stamp.values
    shift = (1 - stamp.anchor[0], 1 - stamp.anchor[1])
    if shift != (0, 0):
        grid = np.roll(grid, shift, axis=(0, 1))
    return grid


def stamp_spectrum(stamp: KernelStamp, h: int, w: int) -> np.ndarray:
    """Transform of the embedded stamp, summed directly over its entries.

    Mathematically identical to ``fft2(embed_stamp(stamp, h, w))`` but exact
    where it matters: a zero-sum stamp (any difference operator) gets an
    exactly zero DC bin regardless of grid size, whereas general-size FFT
    algorithms (Bluestein) leave roundoff there.
    """
    row_phase = np.exp(-2j * np.pi * np.arange(h) / h)
    col_phase = np.exp(-2j * np.pi * np.arange(w) / w)
    ar, ac = stamp.anchor
    out = np.zeros((h, w), dtype=np.complex128)
    for (i, j), v in np.ndenumerate(stamp.values):
        if v == 0.0:
            continue
        pr = (i + 1 - ar) % h
        pc = (j + 1 - ac) % w
        out += v * np.outer(row_phase ** pr, col_phase ** pc)
    return out


def invert_kernel(stamp: KernelStamp, h: int, w: int, epsilon: float = 0.0,
                  dtype=np.float64) -> GreenSpectrum:
    """Bin-wise spectral inverse of ``stamp`` on an h-by-w torus.

    Bins where the stamp's transform has magnitude <= ``epsilon`` are set to
    0 instead of divided; the count is reported so callers can tell a clean
    inversion (one bin, the DC of a zero-sum stamp) from a lossy one.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    num = stamp_spectrum(DIRAC_STAMP, h, w)
    den = stamp_spectrum(stamp, h, w)
    small = np.abs(den) <= epsilon
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=~small)
    out = np.ascontiguousarray(out, dtype=complex_dtype_for(dtype))
    out.setflags(write=False)
    return GreenSpectrum(spectrum=out, kernel_id=stamp.name, zeroed_bins=int(small.sum()))


def build_green_spectrum(h: int, w: int, dtype=np.float64) -> GreenSpectrum:
    """Spectral inverse of the 5-point Laplacian stencil (DC bin zeroed)."""
    if h < 3 or w < 3:
        raise ValueError(f"grid must be at least 3x3, got {h}x{w}")
    g = invert_kernel(LAPLACE_STAMP, h, w, epsilon=0.0, dtype=dtype)
    # The stencil's eigenvalues 2cos(wx) + 2cos(wy) - 4 vanish only at DC.
    if g.zeroed_bins != 1 or g.spectrum[0, 0] != 0:
        raise AssertionError(
            f"Laplacian inversion on {h}x{w} zeroed {g.zeroed_bins} bins (expected DC only)"
        )
    return g


def build_dipole_spectra(h: int, w: int, dtype=np.float64) -> DipoleSpectra:
    """Per-axis gradient-solving multipliers for an h-by-w torus.

    Each multiplier is the transform of an origin-anchored backward
    difference times the Laplacian inverse; the backward stamps are adjoint
    to the forward-difference gradient, so the two products sum to an exact
    identity on every non-DC bin.
    """
    green = cached_green_spectrum(h, w, dtype)
    dx = np.zeros((h, w), dtype=dtype)
    dx[0, 0] = 1.0
    dx[0, 1 % w] -= 1.0
    dy = np.zeros((h, w), dtype=dtype)
    dy[0, 0] = 1.0
    dy[1 % h, 0] -= 1.0
    ctype = complex_dtype_for(dtype)
    vx = np.ascontiguousarray(sfft.fft2(dx) * green.spectrum, dtype=ctype)
    vy = np.ascontiguousarray(sfft.fft2(dy) * green.spectrum, dtype=ctype)
    vx.setflags(write=False)
    vy.setflags(write=False)
    return DipoleSpectra(vx=vx, vy=vy, zeroed_bins=green.zeroed_bins)


def convolve_spectral(f, g: GreenSpectrum) -> np.ndarray:
    """Circular convolution of a real field with a precomputed spectrum.

    Equivalent to the real part of ``ifft2(fft2(f) * g.spectrum)``; computed
    through the real-input half-spectrum transform, which is exact here
    because every stored spectrum is Hermitian (all stamps are real).
    """
    f = as_field(f)
    if f.shape != g.padded_shape:
        raise ValueError(f"field shape {f.shape} != spectrum shape {g.padded_shape}")
    spec = sfft.rfft2(f)
    np.multiply(spec, g.half_spectrum, out=spec)
    return sfft.irfft2(spec, s=f.shape, overwrite_x=True)


# ---------------------------------------------------------------------------
# Size-keyed cache with at-most-once construction per key.

_cache: dict = {}
_cache_lock = threading.Lock()
_in_flight: dict = {}


def _cached(key, builder):
    while True:
        with _cache_lock:
            if key in _cache:
                return _cache[key]
            pending = _in_flight.get(key)
            if pending is None:
                _in_flight[key] = threading.Event()
                break
        pending.wait()
    try:
        value = builder()
        with _cache_lock:
            _cache[key] = value
    finally:
        with _cache_lock:
            _in_flight.pop(key).set()
    return value


def cached_green_spectrum(h: int, w: int, dtype=np.float64) -> GreenSpectrum:
    """Memoized :func:`build_green_spectrum`; safe for concurrent callers."""
    key = ("green", h, w, np.dtype(dtype).str)
    return _cached(key, lambda: build_green_spectrum(h, w, dtype))


def cached_dipole_spectra(h: int, w: int, dtype=np.float64) -> DipoleSpectra:
    """Memoized :func:`build_dipole_spectra`; safe for concurrent callers."""
    key = ("dipole", h, w, np.dtype(dtype).str)
    return _cached(key, lambda: build_dipole_spectra(h, w, dtype))


def clear_spectrum_cache() -> None:
    with _cache_lock:
        _cache.clear()
