from .types import (
    MASK_RATIO_BINS,
    LineDrawing,
    Mask,
    RawMural,
    Sample,
    bin_bounds,
    bin_for_ratio,
)
from .filters import bilateral_filter
from .lines import EdgeExtractor, GradientNmsExtractor, extract_lines
from .augment import AugmentationConfig, augment, replay_geometric
from .masks import MaskLibrary, generate_irregular_mask, sample_mask
from .manifest import DatasetManifest, ManifestEntry, build_manifest
from .fixtures import make_fixture_set

__all__ = [
    "MASK_RATIO_BINS",
    "AugmentationConfig",
    "DatasetManifest",
    "EdgeExtractor",
    "GradientNmsExtractor",
    "LineDrawing",
    "ManifestEntry",
    "Mask",
    "MaskLibrary",
    "RawMural",
    "Sample",
    "augment",
    "bilateral_filter",
    "bin_bounds",
    "bin_for_ratio",
    "build_manifest",
    "extract_lines",
    "generate_irregular_mask",
    "make_fixture_set",
    "replay_geometric",
    "sample_mask",
]
