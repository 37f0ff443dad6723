"""Synthetic mural-like fixtures: flat color fields with dark contour strokes.

Stands in for the real corpus, which is not distributable; the contour
strokes double as exact line drawings.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from ..errors import ParameterError
from . import io
from .manifest import build_manifest, DatasetManifest

# Muted mineral-pigment palette, roughly in mural tones.
_PALETTE = np.array([
    [182, 144, 96], [132, 96, 70], [90, 118, 132], [158, 70, 60],
    [106, 130, 88], [196, 176, 140], [74, 82, 104], [150, 110, 130],
], dtype=np.float32)
_STROKE_VALUE = 24.0


def _disk_fixture(size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    yy, xx = np.mgrid[0:size, 0:size]
    bg = _PALETTE[rng.integers(0, len(_PALETTE))]
    image = np.ones((size, size, 3), dtype=np.float32) * bg
    line = np.zeros((size, size), dtype=np.float32)

    for _ in range(int(rng.integers(3, 7))):
        cy, cx = rng.integers(8, size - 8, size=2)
        r = int(rng.integers(size // 10, size // 4))
        fill = _PALETTE[rng.integers(0, len(_PALETTE))]
        dist = np.sqrt((yy - cy) ** 2 + (xx - cx) ** 2)
        image[dist <= r] = fill
        contour = (dist <= r) & (dist > r - 1.5)
        image[contour] = _STROKE_VALUE
        line[contour] = 1.0

    # A guaranteed straight stroke so every fixture has at least one line pixel.
    row = int(rng.integers(4, size - 4))
    x0, x1 = sorted(rng.integers(2, size - 2, size=2))
    if x1 - x0 < size // 4:
        x1 = min(size - 2, x0 + size // 4)
    image[row, x0:x1] = _STROKE_VALUE
    line[row, x0:x1] = 1.0
    return image, line


def make_fixture_set(n: int, size: int, rng_seed: int,
                     root: str | os.PathLike,
                     val_fraction: float = 0.25) -> DatasetManifest:
    """Write ``n`` synthetic image/line pairs under ``root`` and build a manifest."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    if size < 64:
        raise ParameterError("size must be at least 64")
    root = Path(root)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "lines").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(rng_seed)
    for i in range(n):
        image, line = _disk_fixture(size, rng)
        name = f"fixture_{i:04d}"
        io.save_image(root / "images" / f"{name}.png", image / 127.5 - 1.0)
        io.save_line(root / "lines" / f"{name}.png", line)
    manifest = build_manifest(root, (1.0 - val_fraction, val_fraction), seed=rng_seed)
    manifest.save(root / "manifest.json")
    return manifest
