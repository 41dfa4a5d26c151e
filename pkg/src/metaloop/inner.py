"""Differentiable base-learner update driven by a learned loss."""

from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Union

import numpy as np

from src.config.constants import TaskLossKind
from src.data import Batch
from src.models import BaseLearner, model_forward, output_transform
from src.ndtensor import Tape, Var, backward
from src.optim import SgdConfig


class LearnedLoss(Protocol):
    """A parametric loss over (target, prediction) batches."""

    def parameters(self) -> tuple[np.ndarray, ...]: ...

    def forward(
        self,
        y: Union[np.ndarray, Var],
        y_pred: Union[np.ndarray, Var],
        tape: Tape,
        phi: Optional[Sequence[Var]] = None,
    ) -> Var: ...


@dataclass(frozen=True)
class InnerStep:
    """Result of one base update: new parameters, the gradients used, and the loss value."""

    theta: list[Var]
    grads: list[Var]
    learned_loss: Var


def differentiable_step(
    model: BaseLearner,
    loss: LearnedLoss,
    batch: Batch,
    cfg: SgdConfig,
    tape: Tape,
    theta: Sequence[Var],
    phi: Optional[Sequence[Var]] = None,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
    record: bool = True,
) -> InnerStep:
    """
    theta' = theta - alpha * grad_theta M(y, f_theta(x)), recorded on ``tape``.

    The step is plain SGD whatever momentum or weight decay ``cfg`` carries.
    With ``record=True`` the gradient itself is on the tape, so theta' is
    differentiable with respect to ``phi`` (and theta) through the gradient.

    Args:
        model: Base learner architecture
        loss: Learned loss
        batch: (x, y) training batch
        cfg: Supplies the learning rate alpha
        tape: Tape holding ``theta`` and ``phi``
        theta: Current base parameters as Vars
        phi: Loss parameters as Vars; constants of ``loss`` when omitted
        task: Decides whether predictions are softmax probabilities or raw outputs
        record: Record the inner backward pass
    """
    x, y = batch
    logits = model_forward(model, x, tape, theta)
    value = loss.forward(y, output_transform(task, logits), tape, phi)
    grads = backward(tape, value, theta, record=record)
    stepped = [t - g * cfg.alpha for t, g in zip(theta, grads)]
    return InnerStep(theta=stepped, grads=grads, learned_loss=value)


def inner_step(
    theta: Sequence[Var],
    loss: LearnedLoss,
    batch: Batch,
    cfg: SgdConfig,
    tape: Tape,
    model: BaseLearner,
    phi: Optional[Sequence[Var]] = None,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
) -> list[Var]:
    """Updated base parameters after one recorded learned-loss SGD step."""
    return differentiable_step(model, loss, batch, cfg, tape, theta, phi, task).theta
