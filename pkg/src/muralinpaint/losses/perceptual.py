"""Perceptual objectives: Gram-based style loss and feature content loss.

Feature extractors are pluggable. The production choice is frozen VGG-19
features; a seeded frozen random-conv pyramid stands in when pretrained
weights are unavailable, and an identity extractor serves pixel-space tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Protocol

import torch
from torch import nn

from ..errors import ConfigError, ShapeError


class FeatureExtractor(Protocol):
    """Maps B×3×H×W images in [-1, 1] to named feature maps."""

    layers: tuple[str, ...]

    def __call__(self, images: torch.Tensor) -> dict[str, torch.Tensor]: ...


class IdentityExtractor:
    """Single pixel-space 'layer'; useful for oracles and gradient checks."""

    layers = ("pixels",)

    def __call__(self, images: torch.Tensor) -> dict[str, torch.Tensor]:
        return {"pixels": images}


class RandomConvExtractor(nn.Module):
    """Frozen, seeded 3-level conv pyramid. Deterministic and weight-free
    to download, so it works as a desk-scale perceptual extractor."""

    layers = ("feat1", "feat2", "feat3")

    def __init__(self, seed: int = 0, width: int = 8):
        super().__init__()
        torch.manual_seed(seed)
        self.block1 = nn.Sequential(nn.Conv2d(3, width, 3, padding=1), nn.ReLU())
        self.block2 = nn.Sequential(
            nn.Conv2d(width, 2 * width, 3, stride=2, padding=1), nn.ReLU()
        )
        self.block3 = nn.Sequential(
            nn.Conv2d(2 * width, 4 * width, 3, stride=2, padding=1), nn.ReLU()
        )
        for p in self.parameters():
            p.requires_grad_(False)
        self.eval()

    def __call__(self, images: torch.Tensor) -> dict[str, torch.Tensor]:
        f1 = self.block1(images)
        f2 = self.block2(f1)
        f3 = self.block3(f2)
        return {"feat1": f1, "feat2": f2, "feat3": f3}


class Vgg19Extractor(nn.Module):
    """Frozen pretrained VGG-19 features at the classic style/content taps.

    Inputs in [-1, 1] are remapped to the network's native normalization
    internally.
    """

    layers = ("relu1_1", "relu2_1", "relu3_1", "relu4_1", "relu4_2", "relu5_1")
    _TAPS = {1: "relu1_1", 6: "relu2_1", 11: "relu3_1", 20: "relu4_1",
             22: "relu4_2", 29: "relu5_1"}

    def __init__(self):
        super().__init__()
        from torchvision import models

        try:
            vgg = models.vgg19(weights=models.VGG19_Weights.IMAGENET1K_V1)
        except Exception as exc:
            raise ConfigError(
                f"pretrained VGG-19 weights unavailable: {exc}"
            ) from exc
        self.features = vgg.features[: max(self._TAPS) + 1]
        for p in self.parameters():
            p.requires_grad_(False)
        self.eval()
        self.register_buffer("mean", torch.tensor([0.485, 0.456, 0.406]).view(1, 3, 1, 1))
        self.register_buffer("std", torch.tensor([0.229, 0.224, 0.225]).view(1, 3, 1, 1))

    def __call__(self, images: torch.Tensor) -> dict[str, torch.Tensor]:
        x = ((images + 1.0) / 2.0 - self.mean) / self.std
        out = {}
        for idx, layer in enumerate(self.features):
            x = layer(x)
            if idx in self._TAPS:
                out[self._TAPS[idx]] = x
        return out


def default_extractor(seed: int = 0) -> FeatureExtractor:
    """VGG-19 when pretrained weights can be loaded, else the frozen random pyramid."""
    try:
        return Vgg19Extractor()
    except ConfigError:
        return RandomConvExtractor(seed=seed)


@dataclass
class PerceptualConfig:
    extractor: FeatureExtractor
    content_layers: tuple[str, ...] = ("relu4_2",)
    style_layers: tuple[str, ...] = ("relu1_1", "relu2_1", "relu3_1", "relu4_1", "relu5_1")
    alpha: float = 1.0
    beta: float = 250.0
    style_layer_weights: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        known = set(self.extractor.layers)
        for name in (*self.content_layers, *self.style_layers, *self.style_layer_weights):
            if name not in known:
                raise ConfigError(
                    f"unknown extractor layer {name!r}; available: {sorted(known)}"
                )

    def style_weight(self, layer: str) -> float:
        return self.style_layer_weights.get(layer, 1.0)


def default_perceptual_config(extractor: FeatureExtractor | None = None,
                              **overrides) -> PerceptualConfig:
    """A PerceptualConfig whose layer sets fit the given extractor."""
    if extractor is None:
        extractor = default_extractor()
    if "relu1_1" in extractor.layers:
        return PerceptualConfig(extractor=extractor, **overrides)
    layers = tuple(extractor.layers)
    overrides.setdefault("content_layers", layers)
    overrides.setdefault("style_layers", layers)
    return PerceptualConfig(extractor=extractor, **overrides)


def _batched(images: torch.Tensor) -> torch.Tensor:
    if images.dim() == 3:
        return images.unsqueeze(0)
    if images.dim() != 4:
        raise ShapeError(f"expected C×H×W or B×C×H×W, got {tuple(images.shape)}")
    return images


def gram_matrix(features: torch.Tensor) -> torch.Tensor:
    """Unnormalized channel inner products over flattened spatial positions.

    C×H×W → C×C; B×C×H×W → B×C×C.
    """
    if features.dim() == 3:
        flat = features.flatten(1)
        return flat @ flat.T
    if features.dim() == 4:
        flat = features.flatten(2)
        return flat @ flat.transpose(1, 2)
    raise ShapeError(f"expected C×H×W or B×C×H×W, got {tuple(features.shape)}")


def style_loss(output: torch.Tensor, target: torch.Tensor,
               cfg: PerceptualConfig) -> torch.Tensor:
    """Per-layer weighted squared Gram difference, 1/(4 N² M²) normalized."""
    if output.shape != target.shape:
        raise ShapeError("output and target must have identical shapes")
    out_feats = cfg.extractor(_batched(output))
    tgt_feats = cfg.extractor(_batched(target))
    total = output.new_zeros(())
    batch = _batched(output).shape[0]
    for layer in cfg.style_layers:
        fo, ft = out_feats[layer], tgt_feats[layer]
        n, m = fo.shape[1], fo.shape[2] * fo.shape[3]
        diff = gram_matrix(fo) - gram_matrix(ft)
        total = total + cfg.style_weight(layer) * diff.pow(2).sum() / (4.0 * n * n * m * m)
    return total / batch


def content_loss(output: torch.Tensor, target: torch.Tensor,
                 cfg: PerceptualConfig) -> torch.Tensor:
    """Half the summed squared feature difference over the content layers."""
    if output.shape != target.shape:
        raise ShapeError("output and target must have identical shapes")
    out_feats = cfg.extractor(_batched(output))
    tgt_feats = cfg.extractor(_batched(target))
    total = output.new_zeros(())
    batch = _batched(output).shape[0]
    for layer in cfg.content_layers:
        total = total + 0.5 * (out_feats[layer] - tgt_feats[layer]).pow(2).sum()
    return total / batch
