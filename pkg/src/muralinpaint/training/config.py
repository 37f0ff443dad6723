"""Training configuration: dataclasses, YAML round-trip, CLI overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..errors import ConfigError
from ..losses.total import LossWeights


@dataclass(frozen=True)
class StageConfig:
    epochs: int = 8
    batch: int = 32
    max_steps: int | None = None  # cap for desk-scale runs; None = full epochs

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError("epochs must be at least 1")
        if self.batch < 1:
            raise ConfigError("batch must be at least 1")


@dataclass(frozen=True)
class TrainConfig:
    lr_d: float = 1e-4
    lr_g: float = 1e-5
    adam_betas: tuple[float, float] = (0.5, 0.999)
    seed: int = 0
    stage1: StageConfig = StageConfig(epochs=8, batch=32)
    stage2: StageConfig = StageConfig(epochs=8, batch=8)
    image_size: int = 256
    base_channels: int = 64
    attention: bool = True
    skip_connections: bool = True
    weights: LossWeights = LossWeights()
    l1_squared: bool = False
    grad_clip: float | None = None
    extractor: str = "auto"  # auto | vgg19 | random | identity
    mask_bins: tuple[int, ...] = (10, 20, 30, 40, 50)
    checkpoint_every_epochs: int = 1
    checkpoint_every_steps: int | None = None
    val_masks_seed: int = 1234

    def __post_init__(self):
        if self.lr_d <= 0 or self.lr_g <= 0:
            raise ConfigError("learning rates must be positive")
        if self.image_size % 8:
            raise ConfigError("image_size must be divisible by 8")
        if self.extractor not in ("auto", "vgg19", "random", "identity"):
            raise ConfigError(f"unknown extractor choice {self.extractor!r}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, default=list)
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def diff(self, other: "TrainConfig") -> dict[str, tuple]:
        """Flat key → (self, other) map of differing values."""
        def flatten(d, prefix=""):
            out = {}
            for k, v in d.items():
                key = f"{prefix}{k}"
                if isinstance(v, dict):
                    out.update(flatten(v, key + "."))
                else:
                    out[key] = v
            return out

        a, b = flatten(self.to_dict()), flatten(other.to_dict())
        return {k: (a.get(k), b.get(k)) for k in sorted(set(a) | set(b))
                if a.get(k) != b.get(k)}


def _build(cls, data: dict):
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        if f.name in ("stage1", "stage2") and isinstance(value, dict):
            value = StageConfig(**value)
        elif f.name == "weights" and isinstance(value, dict):
            value = LossWeights(**value)
        elif f.name in ("adam_betas", "mask_bins") and isinstance(value, list):
            value = tuple(value)
        kwargs[f.name] = value
    unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cls(**kwargs)


def load_train_config(path: str | os.PathLike | None = None,
                      overrides: dict | None = None) -> TrainConfig:
    """Config file values first, CLI/keyword overrides on top."""
    data: dict = {}
    if path is not None:
        data = yaml.safe_load(Path(path).read_text()) or {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if "." in key:
            head, tail = key.split(".", 1)
            data.setdefault(head, {})[tail] = value
        else:
            data[key] = value
    return _build(TrainConfig, data)


def save_train_config(cfg: TrainConfig, path: str | os.PathLike) -> None:
    Path(path).write_text(yaml.safe_dump(cfg.to_dict(), sort_keys=True))
