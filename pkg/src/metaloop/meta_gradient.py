"""Meta-gradient of the task loss with respect to the loss-network parameters."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.config.constants import TaskLossKind
from src.data import Batch
from src.metaloop.inner import InnerStep, LearnedLoss, differentiable_step
from src.models import BaseLearner, model_forward, task_loss
from src.ndtensor import Tape, gradients
from src.optim import SgdConfig


@dataclass(frozen=True)
class MetaStep:
    """Everything one unrolled meta step produces."""

    task_loss: float
    phi_grads: list[np.ndarray]
    theta_grads: list[np.ndarray]
    learned_loss: float


def meta_step(
    loss: LearnedLoss,
    model: BaseLearner,
    train_batches: Sequence[Batch],
    meta_batch: Batch,
    inner_cfg: SgdConfig,
    s_inner: int = 1,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
) -> MetaStep:
    """
    Unroll ``s_inner`` learned-loss steps from ``model.theta`` and differentiate
    the task loss on ``meta_batch`` back to the loss parameters.

    Inner step j uses ``train_batches[j % len(train_batches)]``, so a single
    batch is reused for every step. ``theta_grads`` are the base gradients of
    the first inner step, taken at ``model.theta``.
    """
    if s_inner < 1:
        raise ValueError(f"s_inner must be >= 1, got {s_inner}")
    if not train_batches:
        raise ValueError("At least one training batch is required")

    tape = Tape()
    phi = tape.leaves(loss.parameters())
    theta = tape.leaves(model.theta)
    first: Optional[InnerStep] = None
    for j in range(s_inner):
        batch = train_batches[j % len(train_batches)]
        step = differentiable_step(model, loss, batch, inner_cfg, tape, theta, phi, task)
        if first is None:
            first = step
        theta = step.theta

    x_meta, y_meta = meta_batch
    meta_loss = task_loss(task, y_meta, model_forward(model, x_meta, tape, theta), tape)
    return MetaStep(
        task_loss=meta_loss.item(),
        phi_grads=gradients(tape, meta_loss, phi),
        theta_grads=[np.array(g.value) for g in first.grads],
        learned_loss=first.learned_loss.item(),
    )


def meta_gradient(
    loss: LearnedLoss,
    model: BaseLearner,
    train_batches: Sequence[Batch],
    meta_batch: Batch,
    inner_cfg: SgdConfig,
    s_inner: int = 1,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
) -> list[np.ndarray]:
    """Gradient of L_task(f_theta_S(x_meta), y_meta) with respect to phi, one array per tensor."""
    return meta_step(loss, model, train_batches, meta_batch, inner_cfg, s_inner, task).phi_grads
