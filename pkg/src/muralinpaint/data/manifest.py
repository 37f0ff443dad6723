"""Dataset manifest: paired image/line files with train/val splits."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ParameterError, ResourceError

log = logging.getLogger(__name__)

MANIFEST_VERSION = 1
_IMAGE_EXTS = (".png", ".jpg", ".jpeg")


@dataclass
class ManifestEntry:
    id: str
    image: str
    line: str
    split: str  # train | val


@dataclass
class DatasetManifest:
    root: str
    entries: list[ManifestEntry]
    rejected: list[tuple[str, str]] = field(default_factory=list)
    fingerprint: str = ""

    def __post_init__(self):
        if not self.fingerprint:
            self.fingerprint = self._compute_fingerprint()

    def _compute_fingerprint(self) -> str:
        canonical = json.dumps(
            [[e.id, e.image, e.line, e.split] for e in self.entries], sort_keys=True
        )
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def split(self, tag: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == tag]

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entries:
            out[e.split] = out.get(e.split, 0) + 1
        return out

    def save(self, path: str | os.PathLike) -> None:
        doc = {
            "version": MANIFEST_VERSION,
            "root": self.root,
            "counts": self.counts,
            "fingerprint": self.fingerprint,
            "entries": [
                {"id": e.id, "image": e.image, "line": e.line, "split": e.split}
                for e in self.entries
            ],
            "rejected": [{"id": i, "reason": r} for i, r in self.rejected],
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "DatasetManifest":
        doc = json.loads(Path(path).read_text())
        entries = [
            ManifestEntry(e["id"], e["image"], e["line"], e["split"])
            for e in doc["entries"]
        ]
        manifest = cls(
            root=doc["root"],
            entries=entries,
            rejected=[(r["id"], r["reason"]) for r in doc.get("rejected", [])],
            fingerprint=doc.get("fingerprint", ""),
        )
        if doc.get("fingerprint") and doc["fingerprint"] != manifest._compute_fingerprint():
            raise ParameterError("manifest fingerprint does not match its entries")
        return manifest


def build_manifest(root: str | os.PathLike,
                   split_fractions: tuple[float, float] = (0.9, 0.1),
                   seed: int = 0) -> DatasetManifest:
    """Pair ``root/images/*`` with ``root/lines/*`` and assign splits.

    Images without a line partner are rejected with a logged reason. The
    validation fraction is honored to within one item; the split assignment
    is a seeded shuffle of the sorted ids.
    """
    root = Path(root)
    images_dir = root / "images"
    lines_dir = root / "lines"
    if not images_dir.is_dir():
        raise ResourceError(f"{images_dir} does not exist")
    image_files = sorted(
        p for p in images_dir.iterdir() if p.suffix.lower() in _IMAGE_EXTS
    )
    if not image_files:
        raise ResourceError(f"no images found under {images_dir}")

    seen: dict[str, Path] = {}
    duplicates = []
    for p in image_files:
        if p.stem in seen:
            duplicates.append(p.stem)
        seen[p.stem] = p
    if duplicates:
        raise ParameterError(f"duplicate image ids: {sorted(set(duplicates))}")

    paired: list[tuple[str, Path, Path]] = []
    rejected: list[tuple[str, str]] = []
    for p in image_files:
        partners = [lines_dir / (p.stem + ext) for ext in _IMAGE_EXTS]
        line = next((q for q in partners if q.exists()), None)
        if line is None:
            reason = "no line drawing partner"
            log.warning("rejecting %s: %s", p.stem, reason)
            rejected.append((p.stem, reason))
        else:
            paired.append((p.stem, p, line))

    train_frac, val_frac = split_fractions
    if not np.isclose(train_frac + val_frac, 1.0):
        raise ParameterError("split fractions must sum to 1")
    n_val = int(round(len(paired) * val_frac))
    order = np.random.default_rng(seed).permutation(len(paired))
    val_ids = {paired[i][0] for i in order[:n_val]}

    entries = [
        ManifestEntry(
            id=pid,
            image=str(img.relative_to(root)),
            line=str(line.relative_to(root)),
            split="val" if pid in val_ids else "train",
        )
        for pid, img, line in paired
    ]
    return DatasetManifest(root=str(root), entries=entries, rejected=rejected)
