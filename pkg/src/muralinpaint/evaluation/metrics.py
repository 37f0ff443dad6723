"""Image quality metrics computed in [0, 1] metric space."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import convolve2d

from ..errors import ConfigError, ParameterError, ShapeError

_LUMA = np.array([0.299, 0.587, 0.114])

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _check_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared difference over all pixels and channels."""
    a, b = _check_pair(a, b)
    return float(np.mean((a - b) ** 2))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """10·log10(1 / mse) with MAX = 1; identical images give +inf."""
    value = mse(a, b)
    if value == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / value)


def _to_luma(a: np.ndarray) -> np.ndarray:
    if a.ndim == 3 and a.shape[2] == 3:
        return a @ _LUMA
    if a.ndim == 2:
        return a
    raise ShapeError(f"expected H×W or H×W×3, got {a.shape}")


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords**2) / (2.0 * sigma**2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean local SSIM on the luma channel.

    Gaussian 11×11 window (sigma 1.5), K1=0.01, K2=0.03, data range 1; the
    local map is computed on the valid (fully-overlapping) window positions.
    """
    a, b = _check_pair(a, b)
    x, y = _to_luma(a), _to_luma(b)
    if min(x.shape) < SSIM_WINDOW:
        raise ParameterError(
            f"image {x.shape} smaller than the {SSIM_WINDOW}×{SSIM_WINDOW} window"
        )
    w = gaussian_window()
    mu_x = convolve2d(x, w, mode="valid")
    mu_y = convolve2d(y, w, mode="valid")
    xx = convolve2d(x * x, w, mode="valid") - mu_x**2
    yy = convolve2d(y * y, w, mode="valid") - mu_y**2
    xy = convolve2d(x * y, w, mode="valid") - mu_x * mu_y
    c1 = SSIM_K1**2
    c2 = SSIM_K2**2
    num = (2 * mu_x * mu_y + c1) * (2 * xy + c2)
    den = (mu_x**2 + mu_y**2 + c1) * (xx + yy + c2)
    return float(np.mean(num / den))


def lpips(a: np.ndarray, b: np.ndarray, extractor=None) -> float:
    """Perceptual distance: unit-normalized feature differences, averaged.

    ``extractor`` follows the loss module's FeatureExtractor protocol; when
    None, pretrained VGG-19 features are attempted and a ConfigError is
    raised if the weights are unavailable (callers may skip the metric).
    """
    import torch

    from ..losses.perceptual import Vgg19Extractor

    a, b = _check_pair(a, b)
    if extractor is None:
        extractor = Vgg19Extractor()  # raises ConfigError without weights

    def to_tensor(arr):
        if arr.ndim == 2:
            arr = np.repeat(arr[:, :, None], 3, axis=2)
        t = torch.from_numpy(arr.astype(np.float32)).permute(2, 0, 1).unsqueeze(0)
        return t * 2.0 - 1.0  # extractors take [-1, 1]

    with torch.no_grad():
        fa = extractor(to_tensor(a))
        fb = extractor(to_tensor(b))
        total = 0.0
        for layer in extractor.layers:
            xa, xb = fa[layer], fb[layer]
            na = xa / torch.sqrt((xa**2).sum(dim=1, keepdim=True) + 1e-10)
            nb = xb / torch.sqrt((xb**2).sum(dim=1, keepdim=True) + 1e-10)
            total += float(((na - nb) ** 2).sum(dim=1).mean())
    return total / len(extractor.layers)
