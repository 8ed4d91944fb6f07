"""Synthetic test imagery shared by the demo scripts (no bundled photos)."""

from pathlib import Path

import numpy as np

OUTPUT_DIR = Path(__file__).parent / "output"


def ensure_output_dir() -> Path:
    OUTPUT_DIR.mkdir(exist_ok=True)
    return OUTPUT_DIR


def photo_like(h, w, seed=0):
    """Smooth blobs + illumination ramp + patches + fine texture, 8-bit."""
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


def structured_scene(h, w, seed=0):
    """Hard-edged shapes over texture: the regime where thresholding shines."""
    rng = np.random.default_rng(seed)
    img = np.full((h, w), 120.0)
    for _ in range(7):
        r0, r1 = np.sort(rng.integers(0, h, 2))
        c0, c1 = np.sort(rng.integers(0, w, 2))
        img[r0:r1 + 1, c0:c1 + 1] += rng.uniform(-60, 60)
    yy, xx = np.mgrid[0:h, 0:w]
    cy, cx, r = h * 0.35, w * 0.6, min(h, w) * 0.18
    img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] += 55.0
    img += rng.normal(0.0, 7.0, (h, w))
    return np.round(np.clip(img, 0.0, 255.0))


def synthetic_edge_map(img):
    """Stand-in for a learned edge detector: normalized gradient magnitude
    with a soft squash so region boundaries dominate texture."""
    from gfc import gradient

    e = gradient(img)
    mag = np.hypot(e.ex, e.ey)
    mag[:, -1] = 0.0  # drop the zero-exterior boundary samples
    mag[-1, :] = 0.0
    squashed = np.tanh(mag / max(np.percentile(mag, 90), 1e-9))
    return squashed / squashed.max()
