"""Shared patch discriminator scoring overlapping 70×70 patches."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn
from torch.nn.utils import spectral_norm

from ..errors import ConfigError, ShapeError

# Four k4 strided blocks (s2,s2,s2,s1) plus the k4 logit head compose a
# 70 px receptive field; one logit per overlapping 70×70 patch.
_LAYERS = ((2, 1), (2, 2), (2, 4), (1, 8))  # (stride, channel multiple)


@dataclass(frozen=True)
class DiscriminatorConfig:
    receptive_field: int = 70
    norm: str = "spectral"
    activation: str = "leaky_relu"
    base_channels: int = 64

    def __post_init__(self):
        if self.receptive_field != 70:
            raise ConfigError("only the 70×70 patch architecture is supported")
        if self.norm != "spectral" or self.activation != "leaky_relu":
            raise ConfigError("discriminator uses spectral norm + leaky ReLU")


def receptive_field_of(kernels_strides) -> int:
    rf, jump = 1, 1
    for k, s in kernels_strides:
        rf += (k - 1) * jump
        jump *= s
    return rf


class PatchDiscriminator(nn.Module):
    """70×70 PatchGAN: spectral-normalized strided convs with leaky ReLU."""

    # Smallest input that still yields a 1×1 logit map.
    MIN_INPUT = 24

    def __init__(self, cfg: DiscriminatorConfig = DiscriminatorConfig()):
        super().__init__()
        self.cfg = cfg
        b = cfg.base_channels
        layers: list[nn.Module] = []
        in_ch = 3
        for stride, mult in _LAYERS:
            layers.append(
                spectral_norm(nn.Conv2d(in_ch, b * mult, 4, stride, padding=1))
            )
            layers.append(nn.LeakyReLU(0.2, inplace=True))
            in_ch = b * mult
        layers.append(spectral_norm(nn.Conv2d(in_ch, 1, 4, 1, padding=1)))
        self.body = nn.Sequential(*layers)

    def forward(self, image: torch.Tensor) -> torch.Tensor:
        h, w = image.shape[-2:]
        if h < self.MIN_INPUT or w < self.MIN_INPUT:
            raise ShapeError(
                f"input {h}×{w} smaller than the discriminator's minimum "
                f"{self.MIN_INPUT}×{self.MIN_INPUT}"
            )
        return self.body(image)

    @property
    def receptive_field(self) -> int:
        return receptive_field_of([(4, s) for s, _ in _LAYERS] + [(4, 1)])


def discriminator_forward(image: torch.Tensor, d: PatchDiscriminator) -> torch.Tensor:
    """One logit per overlapping receptive-field patch."""
    return d(image)
