"""Model bundle: the three networks plus a config fingerprint, checkpointable."""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import torch

from ..errors import CheckpointError
from .discriminator import DiscriminatorConfig, PatchDiscriminator
from .generators import ColorCorrectionNet, GeneratorConfig, StructureReconstructionNet

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    generator: GeneratorConfig = GeneratorConfig()
    discriminator: DiscriminatorConfig = DiscriminatorConfig()
    attention: bool = True

    def fingerprint(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


def build_models(cfg: ModelConfig, seed: int = 0):
    """Construct G1, G2, D with seeded initialization."""
    torch.manual_seed(seed)
    g1 = StructureReconstructionNet(cfg.generator)
    g2 = ColorCorrectionNet(cfg.generator, attention=cfg.attention)
    d = PatchDiscriminator(cfg.discriminator)
    return g1, g2, d


@dataclass
class ModelBundle:
    g1: StructureReconstructionNet
    g2: ColorCorrectionNet
    d: PatchDiscriminator
    config: ModelConfig
    stage: int = 0  # training stage reached: 0 fresh, 1, or 2
    extras: dict = field(default_factory=dict)  # optimizer / trainer state

    @property
    def fingerprint(self) -> str:
        return self.config.fingerprint()

    def eval_mode(self) -> "ModelBundle":
        for m in (self.g1, self.g2, self.d):
            m.eval()
        return self

    def save(self, path: str | os.PathLike) -> None:
        """Atomic checkpoint write (temp file + rename)."""
        payload = {
            "version": CHECKPOINT_VERSION,
            "fingerprint": self.fingerprint,
            "config": self.config,
            "stage": self.stage,
            "g1": self.g1.state_dict(),
            "g2": self.g2.state_dict(),
            "d": self.d.state_dict(),
            "extras": self.extras,
        }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                torch.save(payload, fh)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ModelBundle":
        try:
            payload = torch.load(path, map_location="cpu", weights_only=False)
        except Exception as exc:
            raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
        if payload.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"checkpoint version {payload.get('version')} != {CHECKPOINT_VERSION}"
            )
        config: ModelConfig = payload["config"]
        if payload["fingerprint"] != config.fingerprint():
            raise CheckpointError(
                f"fingerprint mismatch: file says {payload['fingerprint']}, "
                f"config hashes to {config.fingerprint()}"
            )
        g1, g2, d = build_models(config)
        g1.load_state_dict(payload["g1"])
        g2.load_state_dict(payload["g2"])
        d.load_state_dict(payload["d"])
        return cls(
            g1=g1, g2=g2, d=d, config=config,
            stage=payload["stage"], extras=payload.get("extras", {}),
        )
