"""Experiment configuration schemas."""

import json
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.activations import ActivationConfig
from src.config.constants import (
    BATCH_SIZE,
    DatasetKind,
    LOSS_NET_WIDTH,
    LossNetMode,
    MNIST_CLASSES,
    TaskLossKind,
    TrainMode,
    VALID_FRACTION,
)
from src.harness.errors import ConfigError
from src.metaloop import MetaConfig
from src.models import ModelSpec
from src.optim import AdamConfig, SgdConfig

MNIST_PIXELS = 28 * 28


class DatasetSpec(BaseModel):
    """Where the data comes from, or how to synthesize it."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DatasetKind = DatasetKind.MNIST
    data_dir: Optional[str] = Field(
        default=None, description="MNIST directory; Settings.data_dir if unset"
    )
    n: int = Field(default=1000, ge=2, description="Synthetic train+valid instances")
    n_test: int = Field(default=0, ge=0, description="Synthetic held-out test instances")
    n_features: int = Field(default=2, ge=1)
    n_classes: int = Field(default=2, ge=2)
    separation: float = Field(default=6.0, ge=0.0)
    noise: float = Field(default=0.1, ge=0.0)
    valid_fraction: float = Field(default=VALID_FRACTION, ge=0.0, lt=1.0)
    seed: int = Field(default=0, description="Data seed; fixed across run seeds")

    @property
    def input_dim(self) -> int:
        return MNIST_PIXELS if self.kind is DatasetKind.MNIST else self.n_features

    @property
    def output_dim(self) -> int:
        if self.kind is DatasetKind.MNIST:
            return MNIST_CLASSES
        if self.kind is DatasetKind.SYNTHETIC_REGRESSION:
            return 1
        return self.n_classes


class LossNetSpec(BaseModel):
    """Loss network architecture."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    width: int = Field(default=LOSS_NET_WIDTH, ge=1)
    mode: LossNetMode = LossNetMode.ADALFL
    hidden_activation: Optional[ActivationConfig] = None


class ExperimentConfig(BaseModel):
    """
    One experiment: a task, a base architecture, and a grid of (mode, seed) cells.

    The base optimizer and meta optimizer live under ``meta.inner`` and
    ``meta.adam``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    dataset: DatasetSpec = DatasetSpec()
    model: ModelSpec = ModelSpec()
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY
    loss_network: LossNetSpec = LossNetSpec()
    modes: list[TrainMode] = Field(default_factory=lambda: list(TrainMode), min_length=1)
    seeds: list[int] = Field(default_factory=lambda: [0], min_length=1)
    meta: MetaConfig = MetaConfig()
    batch_size: int = Field(default=BATCH_SIZE, ge=1)
    log_interval: int = Field(default=100, ge=1)
    snapshot_interval: int = Field(default=500, ge=1)
    output_dir: Optional[str] = Field(default=None, description="Settings.output_dir if unset")

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("Modes must be distinct")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("Seeds must be distinct")
        regression = self.dataset.kind is DatasetKind.SYNTHETIC_REGRESSION
        if regression != (self.task is TaskLossKind.SQUARED_ERROR):
            raise ValueError("squared_error goes with synthetic_regression data and only with it")
        if self.model.in_dim != self.dataset.input_dim:
            raise ValueError(
                f"Model in_dim {self.model.in_dim} does not match "
                f"data width {self.dataset.input_dim}"
            )
        if self.model.n_classes != self.dataset.output_dim:
            raise ValueError(
                f"Model outputs {self.model.n_classes} do not match "
                f"targets {self.dataset.output_dim}"
            )
        return self

    @property
    def sgd(self) -> SgdConfig:
        return self.meta.inner

    @property
    def adam(self) -> AdamConfig:
        return self.meta.adam


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read an ExperimentConfig from a JSON file.

    Raises:
        ConfigError: the file is missing, is not JSON, or fails validation
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        return ExperimentConfig.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise ConfigError(f"Invalid config {path}: {exc}") from exc


def save_config(config: ExperimentConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def apply_overrides(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """
    Replace top-level or ``meta`` fields and re-validate the whole config.

    Keys with a ``None`` value are ignored. ``s_train``, ``s_init`` and
    ``s_inner`` are routed into ``meta``.
    """
    meta_keys = {"s_train", "s_init", "s_inner"}
    data = json.loads(config.model_dump_json())
    for key, value in overrides.items():
        if value is None:
            continue
        if key in meta_keys:
            data["meta"][key] = value
        else:
            data[key] = value
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid override: {exc}") from exc
