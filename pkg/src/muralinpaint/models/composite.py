"""Mask-weighted merge of generated content with the original known pixels."""

from __future__ import annotations

import numpy as np
import torch

from ..errors import ShapeError


def _broadcast_mask(mask, reference):
    if mask.ndim == reference.ndim - 1:
        # H×W mask against H×W×C (numpy) or add the channel axis (torch B×1).
        if isinstance(mask, np.ndarray):
            return mask[..., None]
        return mask.unsqueeze(-3)
    return mask


def composite(generated, original, mask):
    """``mask ⊙ generated + (1-mask) ⊙ original`` with exact known pixels.

    Implemented as a select, so pixels outside the hole are bit-identical to
    the original. Accepts numpy arrays or torch tensors; the mask may omit
    the channel axis.
    """
    if generated.shape != original.shape:
        raise ShapeError(
            f"generated {tuple(generated.shape)} vs original {tuple(original.shape)}"
        )
    mask = _broadcast_mask(mask, generated)
    if isinstance(generated, torch.Tensor):
        if mask.shape[-2:] != generated.shape[-2:]:
            raise ShapeError("mask grid does not match images")
        return torch.where(mask > 0.5, generated, original)
    generated = np.asarray(generated)
    original = np.asarray(original)
    mask = np.asarray(mask)
    if mask.shape[:2] != generated.shape[:2]:
        raise ShapeError("mask grid does not match images")
    return np.where(mask > 0.5, generated, original)
