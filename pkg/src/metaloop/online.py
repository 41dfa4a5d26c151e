"""Base-learner training with a fixed, online-adapted, or absent learned loss."""

import logging
from typing import Optional

import numpy as np

from src.config.constants import (
    BATCH_SIZE,
    TRAIN_STREAM_SEED_OFFSET,
    META_STREAM_SEED_OFFSET,
    TaskLossKind,
    TrainMode,
    derive_seed,
)
from src.data import Batch, BatchStream, DataSplits
from src.lossnet import LossNetwork, standard_surface
from src.metaloop.config import MetaConfig
from src.metaloop.errors import DivergenceError
from src.metaloop.evaluation import SplitEvaluator
from src.metaloop.meta_gradient import meta_step
from src.metaloop.offline import check_parameters, check_task_loss, meta_source
from src.metaloop.results import SurfaceSnapshot, TrainResult, TrajectoryPoint
from src.models import (
    BaseLearner,
    model_forward,
    output_transform,
    predict,
    task_loss,
    task_loss_value,
)
from src.ndtensor import NonFiniteError, Tape, gradients
from src.optim import SgdState, adam_step, init_adam_state, sgd_step

logger = logging.getLogger(__name__)


def schedule(total: int, interval: int, include_last: bool = True) -> set[int]:
    """Step 0, every multiple of ``interval`` up to ``total``, and optionally ``total``."""
    if interval < 1:
        raise ValueError(f"Interval must be >= 1, got {interval}")
    steps = set(range(0, total + 1, interval))
    if include_last:
        steps.add(total)
    return steps


def _norm(arrays) -> float:
    return float(np.sqrt(sum(np.sum(np.square(a)) for a in arrays)))


def _task_grads(model: BaseLearner, batch: Batch, task: TaskLossKind) -> tuple[list, float]:
    x, y = batch
    tape = Tape()
    theta = tape.leaves(model.theta)
    loss = task_loss(task, y, model_forward(model, x, tape, theta), tape)
    return gradients(tape, loss, theta), loss.item()


def _learned_grads(
    net: LossNetwork,
    model: BaseLearner,
    batch: Batch,
    task: TaskLossKind,
) -> tuple[list, float]:
    x, y = batch
    tape = Tape()
    theta = tape.leaves(model.theta)
    loss = net.forward(y, output_transform(task, model_forward(model, x, tape, theta)), tape)
    return gradients(tape, loss, theta), loss.item()


def online_train(
    mode: TrainMode,
    net: Optional[LossNetwork],
    model: BaseLearner,
    data: DataSplits,
    cfg: MetaConfig,
    seed: int,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
    batch_size: int = BATCH_SIZE,
    log_interval: int = 100,
    snapshot_interval: int = 500,
) -> TrainResult:
    """
    Train ``model`` for ``cfg.s_train`` steps.

    ``baseline_ce`` descends the task loss directly. ``offline_fixed`` descends
    the learned loss with phi frozen. ``online_adalfl`` does the same but after
    every base step also takes one Adam step (rate ``cfg.eta_online``) on phi
    along the meta-gradient of the task loss on a meta batch, looking
    ``cfg.s_inner`` steps ahead on the current training batch. Base and loss
    updates therefore advance in lockstep.

    The base gradient for step t is always taken with phi_t, before the loss
    update. Momentum and weight decay apply to the realized base update only;
    the step differentiated for the meta-gradient is plain SGD.

    Every mode checks the task loss on each training batch before updating,
    so divergence is reported at the step it first shows, not at the next
    logged evaluation.

    Args:
        mode: Training mode
        net: Loss network; required unless ``mode`` is ``baseline_ce``
        model: Base learner at theta_0
        data: Train, validation and optional test splits
        cfg: Meta-optimization settings
        seed: Run seed; batch streams derive from it
        task: Task loss and prediction transform
        batch_size: Instances per batch
        log_interval: Steps between evaluations (also at step 0 and the last step)
        snapshot_interval: Steps between loss-surface snapshots (from step 0)

    Returns:
        TrainResult with the final model and loss network, evaluations,
        surface snapshots and the parameter trajectory

    Raises:
        DivergenceError: a loss or parameter went non-finite or a task loss
            exceeded the divergence threshold
    """
    if mode.uses_loss_network and net is None:
        raise ValueError(f"Mode '{mode.value}' needs a loss network")
    if not mode.uses_loss_network:
        net = None

    log_steps = schedule(cfg.s_train, log_interval)
    snapshot_steps = schedule(cfg.s_train, snapshot_interval, include_last=False)
    evaluator = SplitEvaluator(data, task)
    result = TrainResult(mode=mode, model=model, net=net)

    train_stream = BatchStream(data.train, batch_size, derive_seed(seed, TRAIN_STREAM_SEED_OFFSET))
    online = mode is TrainMode.ONLINE_ADALFL
    if online:
        meta_stream = BatchStream(
            meta_source(data, cfg), batch_size, derive_seed(seed, META_STREAM_SEED_OFFSET)
        )
        adam_cfg = cfg.online_optimizer()
        adam_state = init_adam_state(net.parameters())
    sgd_state = SgdState()

    def observe(step: int, update_norm: float, batch_loss: float) -> None:
        if step in log_steps:
            rows = evaluator.evaluate(step, model)
            for row in rows:
                check_task_loss("online", step, row.task_loss)
            result.evaluations.extend(rows)
            result.theta_history.append((step, tuple(model.theta)))
            if step > 0:
                result.trajectory.append(
                    TrajectoryPoint(
                        step=step,
                        theta_norm=_norm(model.theta),
                        update_norm=update_norm,
                        phi_norm=_norm(net.parameters()) if net is not None else 0.0,
                        learned_loss=batch_loss,
                    )
                )
            summary = ", ".join(f"{r.split} {r.task_loss:.4f}" for r in rows)
            logger.info(f"[{mode.value} seed={seed}] step {step}/{cfg.s_train}: {summary}")
        if net is not None and step in snapshot_steps:
            result.snapshots.append(SurfaceSnapshot(step=step, rows=standard_surface(net)))

    observe(0, 0.0, float("nan"))
    for step in range(1, cfg.s_train + 1):
        batch = next(train_stream)
        try:
            if mode is TrainMode.BASELINE_CE:
                grads, batch_loss = _task_grads(model, batch, task)
                check_task_loss("online", step, batch_loss)
            elif mode is TrainMode.OFFLINE_FIXED:
                grads, batch_loss = _learned_grads(net, model, batch, task)
                x, y = batch
                check_task_loss("online", step, task_loss_value(task, y, predict(model, x)))
            else:
                meta = meta_step(
                    net, model, [batch], next(meta_stream), cfg.inner, cfg.s_inner, task
                )
                check_task_loss("online", step, meta.task_loss)
                grads, batch_loss = meta.theta_grads, meta.learned_loss
                phi, adam_state = adam_step(net.parameters(), meta.phi_grads, adam_cfg, adam_state)
                check_parameters("online", step, phi)
                net = net.with_parameters(phi)
                result.phi_updates += 1
            theta, sgd_state = sgd_step(model.theta, grads, cfg.inner, sgd_state)
        except NonFiniteError as exc:
            raise DivergenceError("online", step, detail=f"{mode.value}: {exc}") from exc

        update_norm = _norm([new - old for new, old in zip(theta, model.theta)])
        model = model.with_parameters(theta)
        result.theta_updates += 1
        observe(step, update_norm, batch_loss)

    result.model = model
    result.net = net
    return result
