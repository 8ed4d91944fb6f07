import numpy as np
import pytest


def synthetic_photo(h, w, seed=0):
    """Photo-like 8-bit gray test image: illumination ramp, smooth blobs,
    hard-edged patches, and fine texture, quantized to integer gray levels."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:h, 0:w]
    img = np.full((h, w), rng.uniform(90.0, 160.0))
    img += rng.uniform(-40, 40) * xx / w + rng.uniform(-40, 40) * yy / h
    for _ in range(6):
        cy, cx = rng.uniform(0, h), rng.uniform(0, w)
        s = rng.uniform(min(h, w) / 10, min(h, w) / 3)
        img += rng.uniform(-70, 70) * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * s * s))
    for _ in range(3):
        r0, r1 = np.sort(rng.integers(0, h, 2))
        c0, c1 = np.sort(rng.integers(0, w, 2))
        img[r0:r1 + 1, c0:c1 + 1] += rng.uniform(-50, 50)
    img += rng.normal(0.0, 6.0, (h, w))
    return np.round(np.clip(img, 0.0, 255.0))


def blocks_texture(h, w, seed=0):
    """Hard-edged patches over fine noise texture: the structures survive a
    10% gradient threshold while the texture does not."""
    rng = np.random.default_rng(seed)
    img = np.full((h, w), 120.0)
    for _ in range(6):
        r0, r1 = np.sort(rng.integers(0, h, 2))
        c0, c1 = np.sort(rng.integers(0, w, 2))
        img[r0:r1 + 1, c0:c1 + 1] += rng.uniform(-60, 60)
    img += rng.normal(0.0, 6.0, (h, w))
    return np.round(np.clip(img, 0.0, 255.0))


def synthetic_rgb(h, w, seed=0):
    """Three correlated photo-like channels."""
    base = synthetic_photo(h, w, seed)
    chans = []
    for k in range(3):
        tint = synthetic_photo(h, w, seed + 101 + k)
        chans.append(np.round(np.clip(0.7 * base + 0.3 * tint, 0, 255)))
    return tuple(chans)


@pytest.fixture
def photo():
    return synthetic_photo


@pytest.fixture
def rgb_photo():
    return synthetic_rgb
