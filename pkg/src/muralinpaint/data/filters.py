"""Edge-preserving pre-filtering for noisy mural scans."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .types import RawMural


def _kernel_radius(spatial_sigma: float) -> int:
    return max(1, int(np.ceil(3.0 * spatial_sigma)))


def bilateral_filter(image: RawMural | np.ndarray, spatial_sigma: float = 3.0,
                     range_sigma: float = 0.1) -> RawMural | np.ndarray:
    """Denoise a mural while preserving contour edges.

    ``range_sigma`` is measured on normalized intensity ([0, 255] scaled to
    [0, 1]). Channels are filtered independently; borders use edge replication
    and weights are renormalized per pixel, so a constant image is a fixed
    point. Also accepts a bare H×W×3 array (returned as an array), which
    sidesteps RawMural's minimum-size rule for small test grids.
    """
    if spatial_sigma <= 0 or range_sigma <= 0:
        raise ParameterError("bilateral sigmas must be positive")
    raw = isinstance(image, RawMural)
    pixels = (image.pixels if raw else np.asarray(image)).astype(np.float64) / 255.0
    radius = _kernel_radius(spatial_sigma)
    padded = np.pad(pixels, ((radius, radius), (radius, radius), (0, 0)), mode="edge")
    h, w = pixels.shape[:2]

    acc = np.zeros_like(pixels)
    norm = np.zeros_like(pixels)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            spatial_w = np.exp(-(dy * dy + dx * dx) / (2.0 * spatial_sigma**2))
            shifted = padded[radius + dy:radius + dy + h, radius + dx:radius + dx + w]
            range_w = np.exp(-((shifted - pixels) ** 2) / (2.0 * range_sigma**2))
            weight = spatial_w * range_w
            acc += weight * shifted
            norm += weight
    out = np.clip(acc / norm * 255.0, 0.0, 255.0).astype(np.float32)
    if raw:
        return RawMural(pixels=out, source=image.source, id=image.id)
    return out
