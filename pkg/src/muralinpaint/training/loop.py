"""Two-phase training controller: stage 1 trains SRN + D, stage 2 adds CCN."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from ..data import io as data_io
from ..data.manifest import DatasetManifest
from ..data.masks import MaskLibrary, sample_mask
from ..errors import CheckpointError, ConfigError, TrainingError
from ..losses import (
    HistogramConfig,
    IdentityExtractor,
    LossReport,
    RandomConvExtractor,
    Vgg19Extractor,
    content_loss,
    default_extractor,
    default_perceptual_config,
    discriminator_hinge,
    generator_hinge,
    generator_total,
    histogram_loss,
    pixel_l1,
    style_loss,
)
from ..models import (
    ModelBundle,
    ModelConfig,
    DiscriminatorConfig,
    GeneratorConfig,
    build_models,
    composite,
)
from .config import TrainConfig

log = logging.getLogger(__name__)


@dataclass
class TrainState:
    stage: int = 1
    epoch: int = 0          # epoch within the current stage
    step: int = 0           # step within the current stage
    global_step: int = 0
    best_val_psnr: float = float("-inf")
    history: list[dict] = field(default_factory=list)


def _entry_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([seed, *keys])


def _resize_image(arr: np.ndarray, size: int) -> np.ndarray:
    if arr.shape[:2] == (size, size):
        return arr
    img = Image.fromarray(
        np.clip((arr + 1.0) * 127.5, 0, 255).round().astype(np.uint8)
    ).resize((size, size), Image.BILINEAR)
    return np.asarray(img, dtype=np.float32) / 127.5 - 1.0


def _resize_map(arr: np.ndarray, size: int) -> np.ndarray:
    if arr.shape == (size, size):
        return arr
    img = Image.fromarray((arr * 255).astype(np.uint8)).resize(
        (size, size), Image.NEAREST
    )
    return (np.asarray(img) >= 128).astype(np.float32)


class Trainer:
    """Owns the three networks, their optimizers, and the two-stage schedule.

    All randomness (batch order, mask choice) is derived functionally from
    (seed, stage, epoch, step), so runs are reproducible and resume exactly.
    """

    def __init__(self, manifest: DatasetManifest, cfg: TrainConfig,
                 out_dir: str | Path):
        self.manifest = manifest
        self.cfg = cfg
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.out_dir / "training_log.jsonl"

        gen_cfg = GeneratorConfig(
            base_channels=cfg.base_channels,
            skip_connections=cfg.skip_connections,
        )
        self.model_config = ModelConfig(
            generator=gen_cfg,
            discriminator=DiscriminatorConfig(),
            attention=cfg.attention,
        )
        self.g1, self.g2, self.d = build_models(self.model_config, seed=cfg.seed)
        self.opt_g1 = torch.optim.Adam(self.g1.parameters(), lr=cfg.lr_g,
                                       betas=cfg.adam_betas)
        self.opt_g2 = torch.optim.Adam(self.g2.parameters(), lr=cfg.lr_g,
                                       betas=cfg.adam_betas)
        self.opt_d = torch.optim.Adam(self.d.parameters(), lr=cfg.lr_d,
                                      betas=cfg.adam_betas)

        extractor = self._make_extractor(cfg)
        self.perceptual = default_perceptual_config(
            extractor, alpha=cfg.weights.alpha, beta=cfg.weights.beta
        )
        self.histogram_cfg = HistogramConfig(
            extractor=extractor, layers=self.perceptual.style_layers
        )
        self.state = TrainState()

        self.train_entries = manifest.split("train")
        self.val_entries = manifest.split("val")
        if not self.train_entries:
            raise ConfigError("manifest has no training entries")
        root = Path(manifest.root)
        self._images = {}
        self._lines = {}
        for e in manifest.entries:
            self._images[e.id] = _resize_image(
                data_io.load_image(root / e.image), cfg.image_size
            )
            self._lines[e.id] = _resize_map(
                data_io.load_line(root / e.line), cfg.image_size
            )
        self.mask_library = MaskLibrary.generate(
            size=cfg.image_size, per_bin=8, seed=cfg.seed, bins=cfg.mask_bins
        )

    @staticmethod
    def _make_extractor(cfg: TrainConfig):
        if cfg.extractor == "vgg19":
            return Vgg19Extractor()
        if cfg.extractor == "random":
            return RandomConvExtractor(seed=cfg.seed)
        if cfg.extractor == "identity":
            return IdentityExtractor()
        return default_extractor(seed=cfg.seed)

    # ------------------------------------------------------------------ data

    def _batch(self, stage: int, epoch: int, step: int) -> dict[str, torch.Tensor]:
        cfg = self.cfg
        batch_size = (cfg.stage1 if stage == 1 else cfg.stage2).batch
        rng = _entry_rng(cfg.seed, stage, epoch, step)
        idx = rng.integers(0, len(self.train_entries), size=batch_size)
        images, lines, masks = [], [], []
        for k, i in enumerate(idx):
            entry = self.train_entries[int(i)]
            ratio_bin = int(rng.choice(cfg.mask_bins))
            mask = sample_mask(
                self.mask_library, ratio_bin,
                rng_seed=int(rng.integers(0, 2**31)),
            )
            images.append(self._images[entry.id])
            lines.append(self._lines[entry.id])
            masks.append(mask.hole)
        return {
            "image": torch.from_numpy(np.stack(images)).permute(0, 3, 1, 2),
            "line": torch.from_numpy(np.stack(lines)).unsqueeze(1),
            "mask": torch.from_numpy(np.stack(masks)).unsqueeze(1),
        }

    # ----------------------------------------------------------------- steps

    def stage1_step(self, batch: dict[str, torch.Tensor]) -> LossReport:
        """One D update on (real, G1 output) and one full-frame G1 update."""
        if self.state.stage != 1:
            raise TrainingError(f"stage1_step called in stage {self.state.stage}")
        cfg = self.cfg
        image, line, mask = batch["image"], batch["line"], batch["mask"]
        masked = image * (1.0 - mask)

        fake = self.g1(masked, line, mask)

        self.opt_d.zero_grad()
        d_loss = discriminator_hinge(self.d(image), self.d(fake.detach()))
        d_loss.backward()
        self.opt_d.step()

        self.opt_g1.zero_grad()
        total, report = generator_total(
            adversarial=generator_hinge(self.d(fake)),
            content=content_loss(fake, image, self.perceptual),
            style=style_loss(fake, image, self.perceptual),
            l1=pixel_l1(fake, image, squared=cfg.l1_squared),
            stage=1,
            weights=cfg.weights,
        )
        total.backward()
        self._clip(self.g1)
        self.opt_g1.step()

        self._log_step(report, float(d_loss.detach()))
        self.state.step += 1
        self.state.global_step += 1
        return report

    def stage2_step(self, batch: dict[str, torch.Tensor]) -> LossReport:
        """Joint G1+G2 update on the composited output; D sees the composite."""
        if self.state.stage != 2:
            raise TrainingError(f"stage2_step called in stage {self.state.stage}")
        cfg = self.cfg
        image, line, mask = batch["image"], batch["line"], batch["mask"]
        masked = image * (1.0 - mask)

        coarse = self.g1(masked, line, mask)
        refined = self.g2(coarse, mask)
        comp = composite(refined, image, mask)

        self.opt_d.zero_grad()
        d_loss = discriminator_hinge(self.d(image), self.d(comp.detach()))
        d_loss.backward()
        self.opt_d.step()

        self.opt_g1.zero_grad()
        self.opt_g2.zero_grad()
        total, report = generator_total(
            adversarial=generator_hinge(self.d(comp)),
            content=content_loss(comp, image, self.perceptual),
            style=style_loss(comp, image, self.perceptual),
            l1=pixel_l1(comp, image, region=mask, squared=cfg.l1_squared),
            histogram=histogram_loss(comp, image, self.histogram_cfg),
            stage=2,
            weights=cfg.weights,
        )
        total.backward()
        self._clip(self.g1)
        self._clip(self.g2)
        self.opt_g1.step()
        self.opt_g2.step()

        self._log_step(report, float(d_loss.detach()))
        self.state.step += 1
        self.state.global_step += 1
        return report

    def _clip(self, module: torch.nn.Module) -> None:
        if self.cfg.grad_clip is not None:
            torch.nn.utils.clip_grad_norm_(module.parameters(), self.cfg.grad_clip)

    def _log_step(self, report: LossReport, d_loss: float) -> None:
        record = {
            "step": self.state.global_step,
            "stage": self.state.stage,
            "epoch": self.state.epoch,
            **report.to_dict(),
            "d_loss": d_loss,
            "lr_g": self.cfg.lr_g,
            "lr_d": self.cfg.lr_d,
            "time": time.time(),
        }
        with self.log_path.open("a") as fh:
            fh.write(json.dumps(record) + "\n")

    # ------------------------------------------------------------ scheduling

    def bundle(self) -> ModelBundle:
        return ModelBundle(
            g1=self.g1, g2=self.g2, d=self.d,
            config=self.model_config, stage=self.state.stage,
        )

    def save_checkpoint(self, path: str | Path | None = None) -> Path:
        path = Path(path) if path else self.out_dir / (
            f"checkpoint_s{self.state.stage}_e{self.state.epoch:03d}"
            f"_{self.state.global_step:06d}.pt"
        )
        bundle = self.bundle()
        bundle.extras = {
            "opt_g1": self.opt_g1.state_dict(),
            "opt_g2": self.opt_g2.state_dict(),
            "opt_d": self.opt_d.state_dict(),
            "state": {
                "stage": self.state.stage,
                "epoch": self.state.epoch,
                "step": self.state.step,
                "global_step": self.state.global_step,
                "best_val_psnr": self.state.best_val_psnr,
            },
            "train_config": self.cfg.to_dict(),
            "train_fingerprint": self.cfg.fingerprint(),
        }
        bundle.save(path)
        return path

    def resume(self, path: str | Path) -> None:
        """Restore models, optimizers, and schedule position from a checkpoint."""
        bundle = ModelBundle.load(path)
        extras = bundle.extras
        if extras.get("train_fingerprint") != self.cfg.fingerprint():
            try:
                saved = _config_from_dict(extras.get("train_config", {}))
                diff = self.cfg.diff(saved)
            except Exception:
                diff = {"train_config": ("<current>", "<unreadable>")}
            raise CheckpointError(
                f"training config changed since checkpoint; differing keys: {diff}"
            )
        self.g1.load_state_dict(bundle.g1.state_dict())
        self.g2.load_state_dict(bundle.g2.state_dict())
        self.d.load_state_dict(bundle.d.state_dict())
        self.opt_g1.load_state_dict(extras["opt_g1"])
        self.opt_g2.load_state_dict(extras["opt_g2"])
        self.opt_d.load_state_dict(extras["opt_d"])
        s = extras["state"]
        self.state = TrainState(
            stage=s["stage"], epoch=s["epoch"], step=s["step"],
            global_step=s["global_step"], best_val_psnr=s["best_val_psnr"],
        )

    def _steps_per_epoch(self, stage: int) -> int:
        batch = (self.cfg.stage1 if stage == 1 else self.cfg.stage2).batch
        return max(1, -(-len(self.train_entries) // batch))

    def _run_stage(self, stage: int) -> None:
        stage_cfg = self.cfg.stage1 if stage == 1 else self.cfg.stage2
        if self.state.stage != stage:
            self.state.stage = stage
            self.state.epoch = 0
            self.state.step = 0
        per_epoch = self._steps_per_epoch(stage)
        step_fn = self.stage1_step if stage == 1 else self.stage2_step
        while self.state.epoch < stage_cfg.epochs:
            if stage_cfg.max_steps is not None and self.state.step >= stage_cfg.max_steps:
                break
            epoch = self.state.epoch
            start = self.state.step - epoch * per_epoch
            for pos in range(start, per_epoch):
                if stage_cfg.max_steps is not None and self.state.step >= stage_cfg.max_steps:
                    break
                batch = self._batch(stage, epoch, pos)
                try:
                    step_fn(batch)
                except TrainingError:
                    self.save_checkpoint(self.out_dir / "diagnostic.pt")
                    raise
                if (self.cfg.checkpoint_every_steps
                        and self.state.global_step % self.cfg.checkpoint_every_steps == 0):
                    self.save_checkpoint()
            self.state.epoch += 1
            self._validate()
            if self.state.epoch % self.cfg.checkpoint_every_epochs == 0:
                self.save_checkpoint()

    def train(self) -> ModelBundle:
        """Run the full two-stage schedule and return the trained bundle."""
        if self.state.stage == 1:
            self._run_stage(1)
            self.save_checkpoint(self.out_dir / "stage1_final.pt")
            self.state.stage = 2
            self.state.epoch = 0
            self.state.step = 0
        self._run_stage(2)
        final = self.out_dir / "final.pt"
        self.save_checkpoint(final)
        return self.bundle()

    # ------------------------------------------------------------ validation

    def _validate(self) -> dict[str, float] | None:
        if not self.val_entries:
            return None
        from ..evaluation.metrics import psnr as psnr_fn, ssim as ssim_fn
        from ..models.pipeline import inpaint_image

        psnrs, ssims = [], []
        bundle = self.bundle().eval_mode()
        for k, entry in enumerate(self.val_entries):
            ratio_bin = int(self.cfg.mask_bins[k % len(self.cfg.mask_bins)])
            mask = sample_mask(
                self.mask_library, ratio_bin,
                rng_seed=int(_entry_rng(self.cfg.val_masks_seed, k).integers(0, 2**31)),
            )
            image = self._images[entry.id]
            out = inpaint_image(bundle, image, self._lines[entry.id], mask.hole)
            a = data_io.to_unit_range(out)
            b = data_io.to_unit_range(image)
            value = psnr_fn(a, b)
            psnrs.append(value if np.isfinite(value) else 60.0)
            if min(image.shape[:2]) >= 11:
                ssims.append(ssim_fn(a, b))
        for m in (self.g1, self.g2, self.d):
            m.train()
        summary = {
            "val_psnr": float(np.mean(psnrs)),
            "val_ssim": float(np.mean(ssims)) if ssims else float("nan"),
        }
        self.state.history.append(
            {"stage": self.state.stage, "epoch": self.state.epoch, **summary}
        )
        if summary["val_psnr"] > self.state.best_val_psnr:
            self.state.best_val_psnr = summary["val_psnr"]
        log.info("stage %d epoch %d: %s", self.state.stage, self.state.epoch, summary)
        return summary


def _config_from_dict(data: dict) -> TrainConfig:
    from .config import _build

    return _build(TrainConfig, data)


def train(manifest: DatasetManifest, cfg: TrainConfig,
          out_dir: str | Path) -> ModelBundle:
    """Convenience wrapper: build a Trainer and run the full schedule."""
    return Trainer(manifest, cfg, out_dir).train()
