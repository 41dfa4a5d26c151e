"""Experiment orchestration: one cell per (mode, seed)."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from src.config.constants import (
    DatasetKind,
    LOSS_NET_FILE,
    LOSS_NET_INIT_FILE,
    LOSS_NET_SEED_OFFSET,
    METRICS_FILE,
    SNAPSHOTS_FILE,
    Split,
    TRAJECTORY_FILE,
    TrainMode,
    derive_seed,
)
from src.config.settings import get_settings
from src.data import (
    DataSplits,
    SplitSpec,
    load_mnist,
    split,
    synth_classification,
    synth_regression,
)
from src.harness.errors import RunError
from src.harness.records import (
    MetricsRecord,
    SnapshotRecord,
    TrajectoryRecord,
    write_metrics,
    write_snapshots,
    write_trajectory,
)
from src.harness.schemas import DatasetSpec, ExperimentConfig
from src.lossnet import LossNetwork, init_loss_network, save_loss_network
from src.metaloop import DivergenceError, TrainResult, offline_init, online_train
from src.models import init_base_learner, theta_digest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellOutput:
    """Records and files produced by one (mode, seed) cell."""

    run_id: str
    mode: TrainMode
    seed: int
    theta0_digest: str
    metrics: list[MetricsRecord]
    snapshots: list[SnapshotRecord]
    trajectory: list[TrajectoryRecord]
    run_dir: Optional[Path] = None
    wall_clock_s: float = 0.0


def run_id_for(mode: TrainMode, seed: int) -> str:
    return f"{mode.value}-seed{seed}"


def output_root(config: ExperimentConfig) -> Path:
    return Path(config.output_dir or get_settings().output_dir)


def load_task_data(spec: DatasetSpec) -> DataSplits:
    """
    Build train/valid/test splits for a dataset spec.

    MNIST's official test set is kept as the test split; the training file is
    split into train and validation. Synthetic data draws ``n + n_test``
    instances and holds out ``n_test`` of them before the validation split.
    """
    split_spec = SplitSpec(valid_fraction=spec.valid_fraction, seed=spec.seed)
    if spec.kind is DatasetKind.MNIST:
        train_full, test = load_mnist(spec.data_dir or get_settings().data_dir)
        train, valid = split(train_full, split_spec)
        return DataSplits(train=train, valid=valid, test=test)

    total = spec.n + spec.n_test
    if spec.kind is DatasetKind.SYNTHETIC_REGRESSION:
        full = synth_regression(total, spec.n_features, spec.noise, spec.seed)
    else:
        full = synth_classification(
            total, spec.n_features, spec.n_classes, spec.separation, spec.seed
        )

    test = None
    if spec.n_test:
        full, test = split(full, SplitSpec(valid_fraction=spec.n_test / total, seed=spec.seed))
    train, valid = split(full, split_spec)
    return DataSplits(train=train, valid=valid, test=test)


def initial_loss_network(config: ExperimentConfig, seed: int) -> LossNetwork:
    spec = config.loss_network
    return init_loss_network(
        derive_seed(seed, LOSS_NET_SEED_OFFSET),
        width=spec.width,
        mode=spec.mode,
        hidden_activation=spec.hidden_activation,
    )


def _to_records(result: TrainResult, run_id: str, seed: int):
    metrics = [
        MetricsRecord(
            run_id=run_id,
            mode=result.mode.value,
            seed=seed,
            step=e.step,
            split=e.split,
            task_loss=e.task_loss,
            error_rate=e.error_rate,
            wall_clock_s=e.wall_clock_s,
        )
        for e in result.evaluations
    ]
    snapshots = [
        SnapshotRecord(run_id, seed, snap.step, y_fixed, f, loss)
        for snap in result.snapshots
        for y_fixed, f, loss in snap.rows
    ]
    trajectory = [
        TrajectoryRecord(
            run_id,
            result.mode.value,
            seed,
            p.step,
            p.theta_norm,
            p.update_norm,
            p.phi_norm,
            p.learned_loss,
        )
        for p in result.trajectory
    ]
    return metrics, snapshots, trajectory


def run_cell(
    config: ExperimentConfig,
    mode: TrainMode,
    seed: int,
    data: Optional[DataSplits] = None,
    write: bool = True,
) -> CellOutput:
    """
    Train one (mode, seed) cell and write its outputs under ``<out>/<mode>/<seed>/``.

    theta_0 comes from ``seed`` alone, so every mode sharing a seed starts from
    identical base parameters. phi_0 comes from the seed and a fixed offset.
    ``offline_fixed`` and ``online_adalfl`` run the offline initialization
    first; ``baseline_ce`` trains directly on the task loss.

    Raises:
        RunError: training diverged; the cause is a DivergenceError
    """
    run_id = run_id_for(mode, seed)
    data = data or load_task_data(config.dataset)
    started = time.perf_counter()
    logger.info(f"[{run_id}] starting")

    model = init_base_learner(config.model, seed)
    digest = theta_digest(model)
    net: Optional[LossNetwork] = None
    net_init: Optional[LossNetwork] = None
    try:
        if mode.uses_loss_network:
            net_init = offline_init(
                initial_loss_network(config, seed),
                config.model,
                data,
                config.meta,
                seed,
                task=config.task,
                batch_size=config.batch_size,
                log_interval=config.log_interval,
            )
            net = net_init
        result = online_train(
            mode,
            net,
            model,
            data,
            config.meta,
            seed,
            task=config.task,
            batch_size=config.batch_size,
            log_interval=config.log_interval,
            snapshot_interval=config.snapshot_interval,
        )
    except DivergenceError as exc:
        logger.warning(f"[{run_id}] {exc}")
        raise RunError(run_id, exc) from exc

    metrics, snapshots, trajectory = _to_records(result, run_id, seed)
    run_dir = None
    if write:
        run_dir = output_root(config) / mode.value / str(seed)
        write_metrics(metrics, run_dir / METRICS_FILE)
        write_trajectory(trajectory, run_dir / TRAJECTORY_FILE)
        if mode.uses_loss_network:
            write_snapshots(snapshots, run_dir / SNAPSHOTS_FILE)
            save_loss_network(net_init, run_dir / LOSS_NET_INIT_FILE)
            save_loss_network(result.net, run_dir / LOSS_NET_FILE)

    elapsed = time.perf_counter() - started
    final = result.final_evaluation(Split.TEST) or result.final_evaluation(Split.VALID)
    if final is not None:
        logger.info(
            f"[{run_id}] finished in {elapsed:.1f}s: "
            f"final {final.split} loss {final.task_loss:.4f}"
        )
    return CellOutput(
        run_id=run_id,
        mode=mode,
        seed=seed,
        theta0_digest=digest,
        metrics=metrics,
        snapshots=snapshots,
        trajectory=trajectory,
        run_dir=run_dir,
        wall_clock_s=elapsed,
    )


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> list[CellOutput]:
    """
    Run every (mode, seed) cell of ``config``.

    Cells are independent. With more than one worker they run in a process
    pool and each process loads its own data.

    Returns:
        Cell outputs ordered by seed, then by mode as listed in the config
    """
    workers = workers or get_settings().workers
    cells = [(mode, seed) for seed in config.seeds for mode in config.modes]
    logger.info(f"Running {len(cells)} cells with {workers} worker(s)")

    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_cell, config, mode, seed) for mode, seed in cells]
            return [future.result() for future in futures]

    data = load_task_data(config.dataset)
    return [run_cell(config, mode, seed, data=data) for mode, seed in cells]
