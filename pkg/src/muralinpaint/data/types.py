"""Core value types carried through the data pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError, ShapeError

MASK_RATIO_BINS = (10, 20, 30, 40, 50)


@dataclass
class RawMural:
    """An 8-bit style H×W×3 mural image with values in [0, 255]."""

    pixels: np.ndarray
    source: str = "synthetic-fixture"  # real | replica | synthetic-fixture
    id: str = ""

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float32)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ShapeError(f"mural must be H×W×3, got {self.pixels.shape}")
        h, w = self.pixels.shape[:2]
        if h < 64 or w < 64:
            raise ParameterError(f"mural must be at least 64×64, got {h}×{w}")


@dataclass
class LineDrawing:
    """Binary structure map, 1.0 = stroke."""

    strokes: np.ndarray
    provenance: str = "extracted"  # extracted | manual | manual-completed

    def __post_init__(self):
        self.strokes = np.asarray(self.strokes, dtype=np.float32)
        if self.strokes.ndim != 2:
            raise ShapeError(f"line drawing must be H×W, got {self.strokes.shape}")
        vals = np.unique(self.strokes)
        if not np.all(np.isin(vals, (0.0, 1.0))):
            raise ParameterError("line drawing values must be in {0, 1}")


def bin_bounds(ratio_bin: int) -> tuple[float, float]:
    """Half-open hole-fraction interval [low, high) for a percent bin."""
    if ratio_bin not in MASK_RATIO_BINS:
        raise ParameterError(f"ratio_bin must be one of {MASK_RATIO_BINS}, got {ratio_bin}")
    return ratio_bin / 100.0, ratio_bin / 100.0 + 0.10


def bin_for_ratio(ratio: float) -> int | None:
    """The percent bin whose half-open interval contains ``ratio``, if any."""
    for b in MASK_RATIO_BINS:
        low, high = b / 100.0, b / 100.0 + 0.10
        if low <= ratio < high:
            return b
    return None


@dataclass
class Mask:
    """Hole map, 1.0 = missing pixel, tagged with its hole-ratio bin.

    ``ratio_bin`` is None for masks that fall outside the declared bins
    (e.g. after cropping, or hand-painted damage masks).
    """

    hole: np.ndarray
    ratio_bin: int | None = None

    def __post_init__(self):
        self.hole = np.asarray(self.hole, dtype=np.float32)
        if self.hole.ndim != 2:
            raise ShapeError(f"mask must be H×W, got {self.hole.shape}")
        if self.ratio_bin is not None:
            low, high = bin_bounds(self.ratio_bin)
            ratio = float(self.hole.mean())
            if not (low <= ratio < high):
                raise ParameterError(
                    f"hole fraction {ratio:.4f} outside bin [{low:.2f}, {high:.2f})"
                )

    @property
    def hole_ratio(self) -> float:
        return float(self.hole.mean())


@dataclass
class Sample:
    """A training triple: image in [-1, 1], line drawing, and mask."""

    image: np.ndarray
    line: LineDrawing
    mask: Mask
    augmentation_record: list = field(default_factory=list)

    def __post_init__(self):
        self.image = np.asarray(self.image, dtype=np.float32)
        shapes = {self.image.shape[:2], self.line.strokes.shape, self.mask.hole.shape}
        if len(shapes) != 1:
            raise ShapeError(f"image/line/mask grids disagree: {shapes}")
