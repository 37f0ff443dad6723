"""Full inference pipeline: masked image + line → G1 → G2 → composite."""

from __future__ import annotations

import numpy as np
import torch

from ..errors import ShapeError
from .bundle import ModelBundle
from .composite import composite


def pad_to_multiple(arr: np.ndarray, multiple: int = 8) -> tuple[np.ndarray, tuple[int, int]]:
    """Mirror-pad the trailing spatial dims up to a multiple; returns (padded, pad)."""
    h, w = arr.shape[:2]
    pad_h, pad_w = (-h) % multiple, (-w) % multiple
    if pad_h or pad_w:
        widths = [(0, pad_h), (0, pad_w)] + [(0, 0)] * (arr.ndim - 2)
        arr = np.pad(arr, widths, mode="reflect")
    return arr, (pad_h, pad_w)


def inpaint_image(bundle: ModelBundle, image: np.ndarray, line: np.ndarray,
                  mask: np.ndarray) -> np.ndarray:
    """Inpaint one H×W×3 image in [-1, 1]; known pixels pass through exactly.

    Inputs of any size are mirror-padded to a multiple of 8 and cropped back.
    """
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError(f"image must be H×W×3, got {image.shape}")
    if line.shape != image.shape[:2] or mask.shape != image.shape[:2]:
        raise ShapeError(
            f"grids disagree: image {image.shape[:2]}, line {line.shape}, "
            f"mask {mask.shape}"
        )
    h, w = image.shape[:2]
    image_p, _ = pad_to_multiple(image.astype(np.float32))
    line_p, _ = pad_to_multiple(line.astype(np.float32))
    mask_p, _ = pad_to_multiple(mask.astype(np.float32))

    with torch.no_grad():
        img_t = torch.from_numpy(image_p).permute(2, 0, 1).unsqueeze(0)
        line_t = torch.from_numpy(line_p).unsqueeze(0).unsqueeze(0)
        mask_t = torch.from_numpy(mask_p).unsqueeze(0).unsqueeze(0)
        masked = img_t * (1.0 - mask_t)
        coarse = bundle.g1(masked, line_t, mask_t)
        refined = bundle.g2(coarse, mask_t)
        generated = refined.squeeze(0).permute(1, 2, 0).numpy()

    out = composite(generated[:h, :w], image, mask)
    return out.astype(np.float32)
