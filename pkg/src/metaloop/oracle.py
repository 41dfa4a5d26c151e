"""Finite-difference reference for the meta-gradient."""

from typing import Sequence

import numpy as np

from src.config.constants import TaskLossKind
from src.data import Batch
from src.lossnet import LossNetwork
from src.metaloop.inner import differentiable_step
from src.models import BaseLearner, predict, task_loss_value
from src.ndtensor import Tape, cosine_similarity, finite_diff_grad, max_relative_error
from src.optim import SgdConfig


def flatten_parameters(arrays: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.ravel(a) for a in arrays]) if arrays else np.zeros(0)


def unflatten_parameters(vector: np.ndarray, like: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Split a flat vector back into arrays shaped like ``like``."""
    vector = np.asarray(vector, dtype=np.float64).reshape(-1)
    expected = sum(np.size(a) for a in like)
    if vector.size != expected:
        raise ValueError(f"Vector has {vector.size} entries, parameters need {expected}")
    arrays, offset = [], 0
    for a in like:
        size = np.size(a)
        arrays.append(vector[offset:offset + size].reshape(np.shape(a)))
        offset += size
    return arrays


def meta_objective(
    net: LossNetwork,
    model: BaseLearner,
    train_batches: Sequence[Batch],
    meta_batch: Batch,
    inner_cfg: SgdConfig,
    s_inner: int = 1,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
) -> float:
    """Task loss on ``meta_batch`` after ``s_inner`` learned-loss steps, with nothing recorded."""
    theta = list(model.theta)
    for j in range(s_inner):
        tape = Tape()
        step = differentiable_step(
            model,
            net,
            train_batches[j % len(train_batches)],
            inner_cfg,
            tape,
            tape.leaves(theta),
            task=task,
            record=False,
        )
        theta = [t.value for t in step.theta]
    x_meta, y_meta = meta_batch
    return task_loss_value(task, y_meta, predict(model.with_parameters(theta), x_meta))


def fd_meta_gradient(
    net: LossNetwork,
    model: BaseLearner,
    train_batches: Sequence[Batch],
    meta_batch: Batch,
    inner_cfg: SgdConfig,
    s_inner: int = 1,
    task: TaskLossKind = TaskLossKind.CROSS_ENTROPY,
    h: float = 1e-4,
) -> list[np.ndarray]:
    """
    Central-difference meta-gradient, one array per loss-network tensor.

    Costs two unrolled inner loops per scalar parameter; meant for small
    networks only.
    """
    like = net.parameters()

    def objective(vector: np.ndarray) -> float:
        perturbed = net.with_parameters(unflatten_parameters(vector, like))
        return meta_objective(perturbed, model, train_batches, meta_batch, inner_cfg, s_inner, task)

    flat = finite_diff_grad(objective, flatten_parameters(like), h=h)
    return unflatten_parameters(flat, like)


def gradient_agreement(
    actual: Sequence[np.ndarray],
    expected: Sequence[np.ndarray],
) -> tuple[float, float]:
    """(cosine similarity, max relative error) between two gradient lists."""
    a = flatten_parameters(actual)
    b = flatten_parameters(expected)
    return cosine_similarity(a, b), max_relative_error(a, b)
