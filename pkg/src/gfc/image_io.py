"""File ingestion and emission for the command-line tools.

Supported formats: 8-bit PNG (gray or RGB), binary PGM/PPM, and a raw
float32 dump (extension ``.gfcf``) for lossless inspection of intermediate
results.  Quantizing formats clip to the nominal range and round half to
even; the float dump stores exactly what the pipeline produced.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .fields import MultiChannelImage

__all__ = [
    "read_image",
    "write_image",
    "read_gray",
    "read_gfcf",
    "write_gfcf",
]

GFCF_MAGIC = b"GFCF"
_PIL_SUFFIXES = {".png", ".pgm", ".ppm"}


def _from_array(arr: np.ndarray, dtype) -> MultiChannelImage:
    arr = np.asarray(arr)
    if arr.ndim == 2:
        channels = (arr.astype(dtype),)
    elif arr.ndim == 3 and arr.shape[2] in (1, 3):
        channels = tuple(arr[:, :, i].astype(dtype) for i in range(arr.shape[2]))
    else:
        raise ValueError(f"unsupported image layout {arr.shape}")
    return MultiChannelImage(channels)


def read_image(path, dtype=np.float64) -> MultiChannelImage:
    """Load an 8-bit gray/RGB image (or a float dump) as float channels."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image file: {path}")
    if path.suffix.lower() == ".gfcf":
        return read_gfcf(path, dtype=dtype)
    with Image.open(path) as im:
        if im.mode == "P":
            im = im.convert("RGB")
        elif im.mode == "LA":
            im = im.convert("L")
        elif im.mode == "RGBA":
            im = im.convert("RGB")
        if im.mode not in ("L", "RGB"):
            raise ValueError(f"unsupported image mode {im.mode!r} in {path}")
        return _from_array(np.asarray(im), dtype)


def read_gray(path, dtype=np.float64) -> np.ndarray:
    """Load a file as a single gray channel (RGB collapses to luminance)."""
    image = read_image(path, dtype=dtype)
    if len(image.channels) == 1:
        return image.channels[0]
    with Image.open(path) as im:
        return np.asarray(im.convert("L")).astype(dtype)


def quantize(channel: np.ndarray, vmin: float = 0.0, vmax: float = 255.0) -> np.ndarray:
    """Clip to [vmin, vmax] and round half to even into uint8."""
    scaled = np.clip(channel, vmin, vmax)
    return np.rint(scaled).astype(np.uint8)


def write_image(path, image: MultiChannelImage) -> None:
    """Write channels to ``path``; format chosen by extension."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".gfcf":
        write_gfcf(path, image)
        return
    if suffix not in _PIL_SUFFIXES:
        raise ValueError(f"unsupported output format {suffix!r} (use png/pgm/ppm/gfcf)")
    planes = [quantize(c, image.vmin, image.vmax) for c in image.channels]
    if len(planes) == 1:
        pil = Image.fromarray(planes[0], mode="L")
    else:
        pil = Image.fromarray(np.stack(planes, axis=-1), mode="RGB")
    if suffix in (".pgm", ".ppm"):
        pil.save(path, format="PPM")
    else:
        pil.save(path, format="PNG")


def write_gfcf(path, image: MultiChannelImage) -> None:
    """Raw dump: 16-byte header (magic, u32 h/w/channels LE), then planar
    float32 little-endian channel data, row-major."""
    h, w = image.shape
    with open(path, "wb") as fh:
        fh.write(GFCF_MAGIC)
        fh.write(struct.pack("<III", h, w, len(image.channels)))
        for c in image.channels:
            fh.write(np.ascontiguousarray(c, dtype="<f4").tobytes())


def read_gfcf(path, dtype=np.float64) -> MultiChannelImage:
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:4] != GFCF_MAGIC:
            raise ValueError(f"not a GFCF file: {path}")
        h, w, n = struct.unpack("<III", header[4:])
        if n not in (1, 3):
            raise ValueError(f"GFCF channel count must be 1 or 3, got {n}")
        data = np.frombuffer(fh.read(4 * h * w * n), dtype="<f4")
        if data.size != h * w * n:
            raise ValueError(f"truncated GFCF file: {path}")
    planes = data.reshape(n, h, w)
    return MultiChannelImage(tuple(p.astype(dtype) for p in planes))
