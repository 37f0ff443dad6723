"""Irregular-mask library with hole-ratio binning."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ParameterError, ResourceError
from . import io
from .types import MASK_RATIO_BINS, Mask, bin_bounds, bin_for_ratio


def generate_irregular_mask(size: int, ratio_bin: int, rng: np.random.Generator) -> np.ndarray:
    """Draw random thick brush strokes until the hole area hits mid-bin.

    Strokes are random walks with a square brush; any overshoot past the
    mid-bin target is trimmed by dropping random hole pixels, so the final
    hole fraction is exact.
    """
    low, high = bin_bounds(ratio_bin)
    target = int(round((low + high) / 2.0 * size * size))
    hole = np.zeros((size, size), dtype=bool)
    brush = max(2, size // 16)
    while hole.sum() < target:
        y = int(rng.integers(0, size))
        x = int(rng.integers(0, size))
        for _ in range(int(rng.integers(size // 2, 2 * size))):
            y0, x0 = max(0, y - brush // 2), max(0, x - brush // 2)
            hole[y0:y0 + brush, x0:x0 + brush] = True
            y = int(np.clip(y + rng.integers(-3, 4), 0, size - 1))
            x = int(np.clip(x + rng.integers(-3, 4), 0, size - 1))
            if hole.sum() >= target:
                break
    excess = int(hole.sum()) - target
    if excess > 0:
        ys, xs = np.nonzero(hole)
        drop = rng.choice(len(ys), size=excess, replace=False)
        hole[ys[drop], xs[drop]] = False
    return hole.astype(np.float32)


@dataclass
class MaskLibrary:
    """Masks grouped by hole-ratio bin, sampled deterministically by seed."""

    by_bin: dict[int, list[np.ndarray]] = field(default_factory=dict)

    @classmethod
    def from_directory(cls, path: str | os.PathLike) -> "MaskLibrary":
        """Load mask files and bin them by their own hole fraction.

        Files whose hole fraction falls outside every bin are skipped.
        """
        files = sorted(Path(path).glob("*.png"))
        if not files:
            raise ResourceError(f"no mask files found in {path}")
        by_bin: dict[int, list[np.ndarray]] = {}
        for f in files:
            hole = io.load_mask(f)
            b = bin_for_ratio(float(hole.mean()))
            if b is not None:
                by_bin.setdefault(b, []).append(hole)
        return cls(by_bin=by_bin)

    @classmethod
    def generate(cls, size: int, per_bin: int = 8, seed: int = 0,
                 bins: tuple[int, ...] = MASK_RATIO_BINS) -> "MaskLibrary":
        """Procedurally build ``per_bin`` masks for each requested bin."""
        rng = np.random.default_rng(seed)
        by_bin = {
            b: [generate_irregular_mask(size, b, rng) for _ in range(per_bin)]
            for b in bins
        }
        return cls(by_bin=by_bin)


def sample_mask(library: MaskLibrary, ratio_bin: int, rng_seed: int) -> Mask:
    """Pick one mask from the requested bin, deterministically under the seed."""
    bin_bounds(ratio_bin)  # validates the bin name
    pool = library.by_bin.get(ratio_bin, [])
    if not pool:
        raise ResourceError(f"mask library has no masks for bin {ratio_bin}%")
    rng = np.random.default_rng(rng_seed)
    idx = int(rng.integers(0, len(pool)))
    hole = pool[idx]
    if hole.sum() < 1:
        raise ParameterError("training masks must contain at least one hole pixel")
    return Mask(hole=hole.copy(), ratio_bin=ratio_bin)
