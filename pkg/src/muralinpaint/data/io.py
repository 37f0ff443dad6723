"""File conventions for images, line drawings, and masks.

Dataset layout: ``root/images/<id>.png``, ``root/lines/<id>.png``,
``root/masks/<name>.png``.

* images: 8-bit RGB.
* lines: 8-bit grayscale, 0 = stroke, 255 = background. In memory the
  polarity is inverted: 1.0 = stroke on a 0.0 background.
* masks: 8-bit grayscale, 255 = missing, 0 = known. In memory 1.0 = missing.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Load an 8-bit RGB image as float32 H×W×3 in [-1, 1]."""
    arr = np.asarray(Image.open(path).convert("RGB"), dtype=np.float32)
    return arr / 127.5 - 1.0


def save_image(path: str | os.PathLike, image: np.ndarray) -> None:
    """Save a float H×W×3 image in [-1, 1] as 8-bit RGB."""
    arr = np.clip((np.asarray(image) + 1.0) * 127.5, 0, 255)
    Image.fromarray(arr.round().astype(np.uint8), mode="RGB").save(path)


def load_line(path: str | os.PathLike) -> np.ndarray:
    """Load a line drawing file (0 = stroke) as float32 H×W with 1.0 = stroke."""
    arr = np.asarray(Image.open(path).convert("L"), dtype=np.uint8)
    return (arr < 128).astype(np.float32)


def save_line(path: str | os.PathLike, line: np.ndarray) -> None:
    """Save a binary line map (1.0 = stroke) with the inverted file polarity."""
    arr = np.where(np.asarray(line) >= 0.5, 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path)


def load_mask(path: str | os.PathLike) -> np.ndarray:
    """Load a mask file (255 = missing) as float32 H×W with 1.0 = missing."""
    arr = np.asarray(Image.open(path).convert("L"), dtype=np.uint8)
    return (arr >= 128).astype(np.float32)


def save_mask(path: str | os.PathLike, mask: np.ndarray) -> None:
    """Save a binary mask (1.0 = missing) as 8-bit grayscale, 255 = missing."""
    arr = np.where(np.asarray(mask) >= 0.5, 255, 0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path)


def to_unit_range(image: np.ndarray) -> np.ndarray:
    """Map an internal-range [-1, 1] image to metric space [0, 1]."""
    return (np.asarray(image, dtype=np.float64) + 1.0) / 2.0
