"""Offline loss-function initialization by unrolled meta-learning."""

import logging
from typing import Sequence

import numpy as np

from src.config.constants import (
    BATCH_SIZE,
    DIVERGENCE_THRESHOLD,
    MetaBatchSource,
    OFFLINE_META_STREAM_SEED_OFFSET,
    OFFLINE_RESET_SEED_OFFSET,
    OFFLINE_TRAIN_STREAM_SEED_OFFSET,
    TaskLossKind,
    derive_seed,
)
from src.data import BatchStream, DataSplits, Dataset
from src.lossnet import LossNetwork
from src.metaloop.config import MetaConfig
from src.metaloop.errors import DivergenceError
from src.metaloop.meta_gradient import meta_step
from src.models import ModelSpec, init_base_learner
from src.ndtensor import NonFiniteError
from src.optim import adam_step, init_adam_state

logger = logging.getLogger(__name__)


def meta_source(data: DataSplits, cfg: MetaConfig) -> Dataset:
    """Dataset that meta batches are drawn from."""
    if cfg.meta_batch_source is MetaBatchSource.TRAIN_SPLIT:
        return data.train
    if data.valid.n == 0:
        raise ValueError("Meta batches come from the validation split, which is empty")
    return data.valid


def check_task_loss(phase: str, step: int, value: float) -> None:
    if not np.isfinite(value) or value > DIVERGENCE_THRESHOLD:
        raise DivergenceError(phase, step, value)


def check_parameters(phase: str, step: int, params: Sequence[np.ndarray]) -> None:
    for index, p in enumerate(params):
        if not np.all(np.isfinite(p)):
            raise DivergenceError(phase, step, detail=f"parameter tensor {index} is not finite")


def offline_init(
    net: LossNetwork,
    template: ModelSpec,
    data: DataSplits,
    cfg: MetaConfig,
    seed: int,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
    batch_size: int = BATCH_SIZE,
    log_interval: int = 250,
) -> LossNetwork:
    """
    Shape a loss network before training starts.

    Each of the ``cfg.s_init`` iterations draws a fresh base learner, takes
    ``cfg.s_inner`` differentiable steps with the current loss, and applies
    one Adam step (rate ``cfg.eta_offline``) to phi along the gradient of the
    task loss on a meta batch.

    Args:
        net: Initial loss network
        template: Architecture of the base learners drawn each iteration
        data: Train and validation splits
        cfg: Meta-optimization settings
        seed: Run seed; the reset and batch streams derive from it
        task: Task loss and prediction transform
        batch_size: Instances per batch
        log_interval: Iterations between progress messages

    Returns:
        The loss network after ``cfg.s_init`` meta updates

    Raises:
        DivergenceError: a task loss or parameter went non-finite or the task
            loss exceeded the divergence threshold
    """
    adam_cfg = cfg.offline_optimizer()
    state = init_adam_state(net.parameters())
    train_stream = BatchStream(
        data.train, batch_size, derive_seed(seed, OFFLINE_TRAIN_STREAM_SEED_OFFSET)
    )
    meta_stream = BatchStream(
        meta_source(data, cfg), batch_size, derive_seed(seed, OFFLINE_META_STREAM_SEED_OFFSET)
    )
    reset_seed = derive_seed(seed, OFFLINE_RESET_SEED_OFFSET)

    logger.info(f"Offline initialization: {cfg.s_init} iterations, s_inner={cfg.s_inner}")
    for iteration in range(1, cfg.s_init + 1):
        model = init_base_learner(template, [reset_seed, iteration])
        try:
            step = meta_step(
                net,
                model,
                train_stream.take(cfg.s_inner),
                next(meta_stream),
                cfg.inner,
                cfg.s_inner,
                task,
            )
            check_task_loss("offline", iteration, step.task_loss)
            phi, state = adam_step(net.parameters(), step.phi_grads, adam_cfg, state)
        except NonFiniteError as exc:
            raise DivergenceError("offline", iteration, detail=str(exc)) from exc
        check_parameters("offline", iteration, phi)
        net = net.with_parameters(phi)

        if log_interval > 0 and iteration % log_interval == 0:
            logger.info(f"Offline {iteration}/{cfg.s_init}: meta task loss {step.task_loss:.4f}")

    return net
