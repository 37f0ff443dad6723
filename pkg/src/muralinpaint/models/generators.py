"""The two generators: structure reconstruction (G1) and color correction (G2)."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from ..errors import ConfigError, ShapeError
from .blocks import ConvBlock, NonLocalBlock, ResidualBlock, UpBlock


@dataclass(frozen=True)
class GeneratorConfig:
    base_channels: int = 64
    downsample_count: int = 3
    residual_blocks: int = 4
    norm: str = "instance"
    skip_connections: bool = True

    def __post_init__(self):
        if self.downsample_count != 3:
            raise ConfigError("the backbone is fixed to three downsampling stages")
        if self.norm != "instance":
            raise ConfigError("only instance normalization is supported")


def _check_spatial(x: torch.Tensor) -> None:
    h, w = x.shape[-2:]
    if h % 8 or w % 8:
        pad_h, pad_w = (-h) % 8, (-w) % 8
        raise ShapeError(
            f"input {h}×{w} must be divisible by 8; pad by ({pad_h}, {pad_w})"
        )


class EncoderDecoder(nn.Module):
    """Shared backbone: 3 strided downsamples to H/8, residual bottleneck,
    3 upsamples with optional skip concatenation, tanh output."""

    def __init__(self, in_channels: int, cfg: GeneratorConfig,
                 attention: bool = False, zero_init_output: bool = False):
        super().__init__()
        self.cfg = cfg
        b = cfg.base_channels
        self.stem = ConvBlock(in_channels, b, kernel=7)
        self.down1 = ConvBlock(b, 2 * b, kernel=4, stride=2)
        self.down2 = ConvBlock(2 * b, 4 * b, kernel=4, stride=2)
        self.down3 = ConvBlock(4 * b, 4 * b, kernel=4, stride=2)
        self.bottleneck = nn.Sequential(
            *[ResidualBlock(4 * b) for _ in range(cfg.residual_blocks)]
        )
        self.attention = NonLocalBlock(4 * b, embedding_channels=2 * b) if attention else None
        skip = cfg.skip_connections
        self.up3 = UpBlock(4 * b, 4 * b)
        self.fuse3 = ConvBlock(8 * b if skip else 4 * b, 4 * b)
        self.up2 = UpBlock(4 * b, 2 * b)
        self.fuse2 = ConvBlock(4 * b if skip else 2 * b, 2 * b)
        self.up1 = UpBlock(2 * b, b)
        self.fuse1 = ConvBlock(2 * b if skip else b, b)
        self.head = nn.Conv2d(b, 3, 7, padding=3)
        if zero_init_output:
            nn.init.zeros_(self.head.weight)
            nn.init.zeros_(self.head.bias)

    def forward(self, x: torch.Tensor,
                return_bottleneck: bool = False):
        _check_spatial(x)
        e0 = self.stem(x)
        e1 = self.down1(e0)
        e2 = self.down2(e1)
        e3 = self.down3(e2)
        z = self.bottleneck(e3)
        if self.attention is not None:
            z = self.attention(z)

        def merge(up, enc, fuse):
            if self.cfg.skip_connections:
                up = torch.cat([up, enc], dim=1)
            return fuse(up)

        d2 = merge(self.up3(z), e2, self.fuse3)
        d1 = merge(self.up2(d2), e1, self.fuse2)
        d0 = merge(self.up1(d1), e0, self.fuse1)
        out = torch.tanh(self.head(d0))
        if return_bottleneck:
            return out, z
        return out


class StructureReconstructionNet(nn.Module):
    """G1: masked image + line drawing + mask → full-frame prediction."""

    def __init__(self, cfg: GeneratorConfig = GeneratorConfig()):
        super().__init__()
        self.backbone = EncoderDecoder(in_channels=5, cfg=cfg)

    def forward(self, masked_image, line, mask, return_bottleneck=False):
        if masked_image.shape[-2:] != line.shape[-2:] or masked_image.shape[-2:] != mask.shape[-2:]:
            raise ShapeError(
                f"grids disagree: image {tuple(masked_image.shape[-2:])}, "
                f"line {tuple(line.shape[-2:])}, mask {tuple(mask.shape[-2:])}"
            )
        x = torch.cat([masked_image, line, mask], dim=1)
        return self.backbone(x, return_bottleneck=return_bottleneck)


class ColorCorrectionNet(nn.Module):
    """G2: coarse prediction + mask → coarse plus a global residual adjustment.

    The output layer is zero-initialized, so an untrained G2 is exactly the
    identity map; one non-local block sits at the bottleneck.
    """

    def __init__(self, cfg: GeneratorConfig = GeneratorConfig(), attention: bool = True):
        super().__init__()
        self.backbone = EncoderDecoder(
            in_channels=4, cfg=cfg, attention=attention, zero_init_output=True
        )

    def forward(self, coarse, mask):
        if coarse.shape[-2:] != mask.shape[-2:]:
            raise ShapeError(
                f"coarse {tuple(coarse.shape[-2:])} and mask "
                f"{tuple(mask.shape[-2:])} disagree"
            )
        residual = self.backbone(torch.cat([coarse, mask], dim=1))
        return torch.clamp(coarse + residual, -1.0, 1.0)


def srn_forward(masked_image: torch.Tensor, line: torch.Tensor,
                mask: torch.Tensor, g1: StructureReconstructionNet) -> torch.Tensor:
    """Run G1 on a masked image with its line drawing and mask."""
    return g1(masked_image, line, mask)


def ccn_forward(coarse: torch.Tensor, mask: torch.Tensor,
                g2: ColorCorrectionNet) -> torch.Tensor:
    """Run G2's global-residual color correction on a coarse prediction."""
    return g2(coarse, mask)
