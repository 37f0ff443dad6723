"""Pixel reconstruction loss (L1 by default, squared form for ablation)."""

from __future__ import annotations

import logging

import torch

from ..errors import ShapeError

log = logging.getLogger(__name__)


def pixel_l1(output: torch.Tensor, target: torch.Tensor,
             region: torch.Tensor | None = None,
             squared: bool = False) -> torch.Tensor:
    """Mean absolute difference over the region (full frame when ``region``
    is None, hole pixels only when a mask is given).

    An empty region yields 0 with a warning. ``squared=True`` switches to the
    mean squared form.
    """
    if output.shape != target.shape:
        raise ShapeError("output and target must have identical shapes")
    diff = output - target
    err = diff.pow(2) if squared else diff.abs()
    if region is None:
        return err.mean()
    if region.shape[-2:] != output.shape[-2:]:
        raise ShapeError(
            f"region {tuple(region.shape[-2:])} does not match images "
            f"{tuple(output.shape[-2:])}"
        )
    weight = (region > 0.5).to(err.dtype)
    while weight.dim() < err.dim():
        weight = weight.unsqueeze(0)
    weight = weight.expand_as(err)
    denom = weight.sum()
    if denom == 0:
        log.warning("pixel loss over an empty region; returning 0")
        return output.new_zeros(())
    return (err * weight).sum() / denom
