from .blocks import NonLocalBlock, ResidualBlock, nonlocal_forward
from .generators import (
    ColorCorrectionNet,
    GeneratorConfig,
    StructureReconstructionNet,
    ccn_forward,
    srn_forward,
)
from .discriminator import (
    DiscriminatorConfig,
    PatchDiscriminator,
    discriminator_forward,
)
from .composite import composite
from .bundle import ModelBundle, ModelConfig, build_models
from .pipeline import inpaint_image, pad_to_multiple

__all__ = [
    "ColorCorrectionNet",
    "DiscriminatorConfig",
    "GeneratorConfig",
    "ModelBundle",
    "ModelConfig",
    "NonLocalBlock",
    "PatchDiscriminator",
    "ResidualBlock",
    "StructureReconstructionNet",
    "build_models",
    "ccn_forward",
    "composite",
    "discriminator_forward",
    "inpaint_image",
    "nonlocal_forward",
    "pad_to_multiple",
    "srn_forward",
]
