"""Desk-scale MNIST logistic regression: baseline against online loss learning."""

import numpy as np
import pytest

from src.config import get_settings
from src.config.constants import Split, TrainMode
from src.data import load_mnist, mnist_available
from src.harness import DatasetSpec, ExperimentConfig, run_experiment
from src.metaloop import MetaConfig
from src.models import ModelSpec

SEEDS = [0, 1, 2]

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(
        not mnist_available(get_settings().data_dir),
        reason="MNIST files not found in ADALFL_DATA_DIR",
    ),
]


def _final_test_error(cells, mode):
    finals = []
    for cell in cells:
        if cell.mode is not mode:
            continue
        test = [r for r in cell.metrics if r.split == Split.TEST.value]
        finals.append(max(test, key=lambda r: r.step).error_rate)
    assert len(finals) == len(SEEDS)
    return float(np.mean(finals))


def test_train_pixels_are_standardized():
    train, _ = load_mnist(get_settings().data_dir)
    assert abs(float(np.mean(train.x))) < 0.02
    assert float(np.std(train.x)) == pytest.approx(1.0, abs=0.05)


def test_logistic_baseline_and_adalfl(tmp_path):
    config = ExperimentConfig(
        dataset=DatasetSpec(data_dir=get_settings().data_dir),
        model=ModelSpec(),
        modes=[TrainMode.BASELINE_CE, TrainMode.ONLINE_ADALFL],
        seeds=SEEDS,
        meta=MetaConfig(s_init=500, s_train=5000),
        batch_size=128,
        log_interval=1000,
        snapshot_interval=1000,
        output_dir=str(tmp_path),
    )
    cells = run_experiment(config, workers=get_settings().workers)

    baseline = _final_test_error(cells, TrainMode.BASELINE_CE)
    adalfl = _final_test_error(cells, TrainMode.ONLINE_ADALFL)
    assert 0.070 <= baseline <= 0.095
    assert adalfl <= baseline + 0.002
