"""Seeded joint augmentation of (image, line, mask) triples."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from .types import LineDrawing, Mask, Sample, bin_for_ratio


@dataclass
class AugmentationConfig:
    """Which transforms to draw from. The default config is the identity."""

    hflip_prob: float = 0.0
    rotations: tuple[int, ...] = ()  # degrees, multiples of 90
    crop_size: int | None = None
    color_jitter: float = 0.0  # per-channel brightness/contrast, fraction

    def __post_init__(self):
        if any(r % 90 != 0 for r in self.rotations):
            raise ParameterError("rotations must be multiples of 90 degrees")
        if not (0.0 <= self.hflip_prob <= 1.0):
            raise ParameterError("hflip_prob must be in [0, 1]")
        if self.color_jitter < 0:
            raise ParameterError("color_jitter must be non-negative")


def _draw_record(shape: tuple[int, int], cfg: AugmentationConfig,
                 rng: np.random.Generator) -> list[tuple]:
    record: list[tuple] = []
    if cfg.rotations:
        deg = int(rng.choice(cfg.rotations))
        if deg % 360 != 0:
            record.append(("rot90", (deg // 90) % 4))
    if cfg.hflip_prob > 0 and rng.random() < cfg.hflip_prob:
        record.append(("hflip",))
    if cfg.crop_size is not None:
        # Crop bounds refer to the grid after any rotation.
        h, w = shape
        if record and record[0][0] == "rot90" and record[0][1] % 2 == 1:
            h, w = w, h
        if cfg.crop_size > h or cfg.crop_size > w:
            raise ParameterError(
                f"crop {cfg.crop_size} larger than image {h}×{w}"
            )
        top = int(rng.integers(0, h - cfg.crop_size + 1))
        left = int(rng.integers(0, w - cfg.crop_size + 1))
        record.append(("crop", top, left, cfg.crop_size))
    if cfg.color_jitter > 0:
        scale = rng.uniform(1 - cfg.color_jitter, 1 + cfg.color_jitter, size=3)
        shift = rng.uniform(-cfg.color_jitter, cfg.color_jitter, size=3)
        record.append(("color", tuple(scale.tolist()), tuple(shift.tolist())))
    return record


def replay_geometric(grid: np.ndarray, record: list[tuple]) -> np.ndarray:
    """Apply the geometric part of an augmentation record to any H×W[, C] grid."""
    out = grid
    for entry in record:
        kind = entry[0]
        if kind == "rot90":
            out = np.rot90(out, k=entry[1], axes=(0, 1))
        elif kind == "hflip":
            out = out[:, ::-1]
        elif kind == "crop":
            top, left, size = entry[1:]
            out = out[top:top + size, left:left + size]
    return np.ascontiguousarray(out)


def _apply_color(image: np.ndarray, record: list[tuple]) -> np.ndarray:
    out = image
    for entry in record:
        if entry[0] == "color":
            scale = np.asarray(entry[1], dtype=np.float32)
            shift = np.asarray(entry[2], dtype=np.float32)
            out = np.clip(out * scale + shift, -1.0, 1.0)
    return out


def augment(sample: Sample, ops: AugmentationConfig, rng_seed: int) -> Sample:
    """Apply one seeded draw of the configured transforms.

    The geometric transform is identical across image, line, and mask; the
    color transform touches the image only.
    """
    rng = np.random.default_rng(rng_seed)
    record = _draw_record(sample.image.shape[:2], ops, rng)
    image = _apply_color(replay_geometric(sample.image, record), record)
    line = replay_geometric(sample.line.strokes, record)
    mask = replay_geometric(sample.mask.hole, record)
    return Sample(
        image=image,
        line=LineDrawing(strokes=line, provenance=sample.line.provenance),
        mask=Mask(hole=mask, ratio_bin=bin_for_ratio(float(mask.mean()))),
        augmentation_record=list(sample.augmentation_record) + record,
    )
