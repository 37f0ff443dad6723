"""Building blocks shared by the two generators."""

from __future__ import annotations

import torch
from torch import nn

from ..errors import ShapeError


class ConvBlock(nn.Module):
    """conv → instance norm → ReLU."""

    def __init__(self, in_ch: int, out_ch: int, kernel: int = 3, stride: int = 1):
        super().__init__()
        self.block = nn.Sequential(
            nn.Conv2d(in_ch, out_ch, kernel, stride, padding=(kernel - stride) // 2),
            nn.InstanceNorm2d(out_ch, affine=True),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.block(x)


class UpBlock(nn.Module):
    """transposed conv ×2 upsample → instance norm → ReLU."""

    def __init__(self, in_ch: int, out_ch: int):
        super().__init__()
        self.block = nn.Sequential(
            nn.ConvTranspose2d(in_ch, out_ch, 4, stride=2, padding=1),
            nn.InstanceNorm2d(out_ch, affine=True),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.block(x)


class ResidualBlock(nn.Module):
    """conv-norm-relu-conv-norm plus identity, dilation 1."""

    def __init__(self, channels: int):
        super().__init__()
        self.body = nn.Sequential(
            nn.Conv2d(channels, channels, 3, padding=1),
            nn.InstanceNorm2d(channels, affine=True),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels, channels, 3, padding=1),
            nn.InstanceNorm2d(channels, affine=True),
        )

    def forward(self, x):
        return x + self.body(x)


class NonLocalBlock(nn.Module):
    """Self-attention over all spatial positions, in residual form.

    Each position's response is a softmax-weighted sum of value projections
    over every position, embedded-Gaussian style: 1×1 projections theta/phi
    form the similarity logits, g forms the values, and an output projection
    maps back to the input width before the residual add.
    """

    def __init__(self, channels: int, embedding_channels: int | None = None):
        super().__init__()
        self.embedding_channels = embedding_channels or max(1, channels // 2)
        self.theta = nn.Conv2d(channels, self.embedding_channels, 1)
        self.phi = nn.Conv2d(channels, self.embedding_channels, 1)
        self.g = nn.Conv2d(channels, self.embedding_channels, 1)
        self.out_proj = nn.Conv2d(self.embedding_channels, channels, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() != 4:
            raise ShapeError(f"non-local block expects B×C×H×W, got {tuple(x.shape)}")
        b, c, h, w = x.shape
        q = self.theta(x).flatten(2).transpose(1, 2)       # B×HW×E
        k = self.phi(x).flatten(2)                         # B×E×HW
        v = self.g(x).flatten(2).transpose(1, 2)           # B×HW×E
        attn = torch.softmax(q @ k, dim=-1)                # B×HW×HW
        y = (attn @ v).transpose(1, 2).reshape(b, self.embedding_channels, h, w)
        return x + self.out_proj(y)

    def attended(self, x: torch.Tensor) -> torch.Tensor:
        """Pre-projection attention response (used by oracle tests)."""
        b, c, h, w = x.shape
        q = self.theta(x).flatten(2).transpose(1, 2)
        k = self.phi(x).flatten(2)
        v = self.g(x).flatten(2).transpose(1, 2)
        attn = torch.softmax(q @ k, dim=-1)
        return (attn @ v).transpose(1, 2).reshape(b, self.embedding_channels, h, w)


def nonlocal_forward(x: torch.Tensor, block: NonLocalBlock) -> torch.Tensor:
    """Apply a non-local block to a C×H×W or B×C×H×W feature map."""
    if x.dim() == 3:
        return block(x.unsqueeze(0)).squeeze(0)
    return block(x)
