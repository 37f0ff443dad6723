import numpy as np
import pytest
import torch

from muralinpaint.data.fixtures import make_fixture_set
from muralinpaint.models.bundle import ModelConfig, build_models
from muralinpaint.models.discriminator import DiscriminatorConfig
from muralinpaint.models.generators import GeneratorConfig

torch.set_num_threads(1)


@pytest.fixture(scope="session")
def fixture_dataset(tmp_path_factory):
    """8 synthetic 64×64 murals with exact line drawings."""
    root = tmp_path_factory.mktemp("fixtures")
    manifest = make_fixture_set(n=8, size=64, rng_seed=7, root=root)
    return manifest


@pytest.fixture()
def tiny_model_config():
    return ModelConfig(
        generator=GeneratorConfig(base_channels=8),
        discriminator=DiscriminatorConfig(base_channels=8),
        attention=True,
    )


@pytest.fixture()
def tiny_models(tiny_model_config):
    return build_models(tiny_model_config, seed=0)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
