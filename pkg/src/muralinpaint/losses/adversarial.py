"""Hinge adversarial objectives for the shared patch discriminator."""

from __future__ import annotations

import torch
import torch.nn.functional as F

from ..errors import ShapeError


def adversarial_losses(d_real: torch.Tensor,
                       d_fake: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """Hinge GAN terms: returns ``(g_term, d_term)``.

    d_term = mean(relu(1 - d_real)) + mean(relu(1 + d_fake));
    g_term = -mean(d_fake).
    """
    if d_real.shape != d_fake.shape:
        raise ShapeError("real and fake logit maps must have identical shapes")
    d_term = F.relu(1.0 - d_real).mean() + F.relu(1.0 + d_fake).mean()
    g_term = -d_fake.mean()
    return g_term, d_term


def generator_hinge(d_fake_for_g: torch.Tensor) -> torch.Tensor:
    """Generator's adversarial term on logits with gradient to the generator."""
    return -d_fake_for_g.mean()


def discriminator_hinge(d_real: torch.Tensor, d_fake: torch.Tensor) -> torch.Tensor:
    """Discriminator's hinge term on detached fake logits."""
    return F.relu(1.0 - d_real).mean() + F.relu(1.0 + d_fake).mean()
