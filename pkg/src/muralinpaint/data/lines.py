"""Line-drawing extraction from (pre-filtered) mural images.

The production pipeline plugs in an external deep edge model through the
``EdgeExtractor`` protocol; the built-in default is a gradient-magnitude
extractor with non-maximum suppression, which is enough for fixtures and
for bootstrapping real data.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from ..errors import ExtractionError, ParameterError
from .types import LineDrawing, RawMural

_LUMA = np.array([0.299, 0.587, 0.114])


class EdgeExtractor(Protocol):
    """Maps an H×W×3 image in [0, 1] to an edge response in [0, 1]."""

    def __call__(self, image: np.ndarray) -> np.ndarray: ...


class GradientNmsExtractor:
    """Sobel gradient magnitude followed by 4-direction non-maximum suppression."""

    def __call__(self, image: np.ndarray) -> np.ndarray:
        gray = image @ _LUMA
        padded = np.pad(gray, 1, mode="edge")
        gx = (
            padded[:-2, 2:] + 2 * padded[1:-1, 2:] + padded[2:, 2:]
            - padded[:-2, :-2] - 2 * padded[1:-1, :-2] - padded[2:, :-2]
        )
        gy = (
            padded[2:, :-2] + 2 * padded[2:, 1:-1] + padded[2:, 2:]
            - padded[:-2, :-2] - 2 * padded[:-2, 1:-1] - padded[:-2, 2:]
        )
        mag = np.hypot(gx, gy)
        # guard against fp residue on flat images being normalized up to 1.0
        if mag.max() > 1e-8:
            response = self._nms(mag, gx, gy)
            response /= mag.max()
        else:
            response = mag
        return np.clip(response, 0.0, 1.0)

    @staticmethod
    def _nms(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
        # Quantize the gradient direction to 0/45/90/135 degrees and keep
        # only pixels that dominate both neighbors along that direction.
        angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
        padded = np.pad(mag, 1, mode="constant")
        neighbors = {
            0: (padded[1:-1, 2:], padded[1:-1, :-2]),
            45: (padded[:-2, 2:], padded[2:, :-2]),
            90: (padded[:-2, 1:-1], padded[2:, 1:-1]),
            135: (padded[:-2, :-2], padded[2:, 2:]),
        }
        sector = np.zeros_like(angle, dtype=int)
        sector[(angle >= 22.5) & (angle < 67.5)] = 45
        sector[(angle >= 67.5) & (angle < 112.5)] = 90
        sector[(angle >= 112.5) & (angle < 157.5)] = 135
        out = np.zeros_like(mag)
        for direction, (fwd, bwd) in neighbors.items():
            keep = (sector == direction) & (mag >= fwd) & (mag >= bwd)
            out[keep] = mag[keep]
        return out


def extract_lines(image: RawMural | np.ndarray, extractor: EdgeExtractor | None = None,
                  threshold: float = 0.5) -> LineDrawing:
    """Binarize an edge extractor's response into a line drawing.

    ``threshold`` applies to the extractor's [0, 1] response; a pixel becomes
    a stroke when its response strictly exceeds the threshold. Also accepts
    a bare H×W×3 array for small test grids.
    """
    if not (0.0 < threshold <= 1.0):
        raise ParameterError(f"threshold must be in (0, 1], got {threshold}")
    if extractor is None:
        extractor = GradientNmsExtractor()
    pixels = image.pixels if isinstance(image, RawMural) else np.asarray(image)
    try:
        response = np.asarray(extractor(pixels.astype(np.float64) / 255.0))
    except Exception as exc:
        raise ExtractionError(f"edge extractor failed: {exc}") from exc
    if response.shape != pixels.shape[:2]:
        raise ExtractionError(
            f"extractor response {response.shape} does not match image grid "
            f"{pixels.shape[:2]}"
        )
    strokes = (response > threshold).astype(np.float32)
    return LineDrawing(strokes=strokes, provenance="extracted")
