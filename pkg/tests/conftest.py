"""Shared fixtures: tiny synthetic tasks, tiny loss networks, IDX files on disk."""

import numpy as np
import pytest

from src.config.constants import DatasetKind, TrainMode
from src.data import (
    DataSplits,
    SplitSpec,
    split,
    synth_classification,
    write_idx_images,
    write_idx_labels,
)
from src.harness import DatasetSpec, ExperimentConfig, LossNetSpec
from src.lossnet import init_loss_network
from src.metaloop import MetaConfig
from src.models import ModelSpec, init_base_learner
from src.optim import SgdConfig


@pytest.fixture
def separable_data() -> DataSplits:
    """Two well-separated 2-d blobs, 200 rows split 90/10."""
    full = synth_classification(200, 2, 2, separation=10.0, seed=0)
    train, valid = split(full, SplitSpec(valid_fraction=0.1, seed=0))
    return DataSplits(train=train, valid=valid)


@pytest.fixture
def tiny_spec() -> ModelSpec:
    return ModelSpec(in_dim=2, n_classes=2)


@pytest.fixture
def tiny_model(tiny_spec):
    return init_base_learner(tiny_spec, seed=0)


@pytest.fixture
def tiny_net():
    return init_loss_network(seed=1, width=8)


@pytest.fixture
def tiny_batches(separable_data):
    x, y = separable_data.train.x, separable_data.train.y
    return [(x[:16], y[:16]), (x[16:32], y[16:32])], (x[32:48], y[32:48])


@pytest.fixture
def tiny_meta_config() -> MetaConfig:
    return MetaConfig(s_init=3, s_inner=1, s_train=20, inner=SgdConfig(alpha=0.1))


@pytest.fixture
def idx_dir(tmp_path):
    """Five 28x28 images with labels 0..4 as raw IDX files."""
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(5, 28, 28), dtype=np.uint8)
    labels = np.arange(5, dtype=np.uint8)
    write_idx_images(tmp_path / "images-idx3-ubyte", images)
    write_idx_labels(tmp_path / "labels-idx1-ubyte", labels)
    return tmp_path, images, labels


@pytest.fixture
def synthetic_config(tmp_path) -> ExperimentConfig:
    """A complete experiment small enough to run in a test."""
    return ExperimentConfig(
        dataset=DatasetSpec(
            kind=DatasetKind.SYNTHETIC_CLASSIFICATION,
            n=120,
            n_test=40,
            n_features=2,
            n_classes=2,
            separation=6.0,
        ),
        model=ModelSpec(in_dim=2, n_classes=2),
        loss_network=LossNetSpec(width=8),
        modes=[TrainMode.BASELINE_CE, TrainMode.ONLINE_ADALFL],
        seeds=[0, 1, 2],
        meta=MetaConfig(s_init=4, s_inner=1, s_train=12, inner=SgdConfig(alpha=0.1)),
        batch_size=16,
        log_interval=5,
        snapshot_interval=5,
        output_dir=str(tmp_path / "runs"),
    )
