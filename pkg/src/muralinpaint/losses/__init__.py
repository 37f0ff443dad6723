from .perceptual import (
    FeatureExtractor,
    IdentityExtractor,
    PerceptualConfig,
    RandomConvExtractor,
    Vgg19Extractor,
    content_loss,
    default_extractor,
    default_perceptual_config,
    gram_matrix,
    style_loss,
)
from .histogram import HistogramConfig, histogram_loss, histogram_match
from .pixel import pixel_l1
from .adversarial import adversarial_losses, discriminator_hinge, generator_hinge
from .total import LossReport, LossWeights, generator_total

__all__ = [
    "FeatureExtractor",
    "HistogramConfig",
    "IdentityExtractor",
    "LossReport",
    "LossWeights",
    "PerceptualConfig",
    "RandomConvExtractor",
    "Vgg19Extractor",
    "adversarial_losses",
    "content_loss",
    "default_extractor",
    "default_perceptual_config",
    "discriminator_hinge",
    "generator_hinge",
    "generator_total",
    "gram_matrix",
    "histogram_loss",
    "histogram_match",
    "pixel_l1",
    "style_loss",
]
