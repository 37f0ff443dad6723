from .config import StageConfig, TrainConfig, load_train_config, save_train_config
from .loop import Trainer, TrainState, train

__all__ = [
    "StageConfig",
    "TrainConfig",
    "TrainState",
    "Trainer",
    "load_train_config",
    "save_train_config",
    "train",
]
