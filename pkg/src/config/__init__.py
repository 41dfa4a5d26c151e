"""Configuration module."""

from src.config.settings import Settings, get_settings
from src.config.constants import (
    TrainMode,
    ActivationKind,
    LossNetMode,
    ArchKind,
    TaskLossKind,
    MetaBatchSource,
    Split,
    DatasetKind,
)

__all__ = [
    "Settings",
    "get_settings",
    "TrainMode",
    "ActivationKind",
    "LossNetMode",
    "ArchKind",
    "TaskLossKind",
    "MetaBatchSource",
    "Split",
    "DatasetKind",
]
