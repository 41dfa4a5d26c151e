"""Handcrafted task losses and the error-rate metric."""

import numpy as np
from scipy.special import logsumexp

from src.config.constants import TaskLossKind
from src.ndtensor import ShapeError, Tape, Var, log_softmax, softmax


def _check_one_hot(y: np.ndarray) -> None:
    is_binary = np.all((y == 0.0) | (y == 1.0))
    if not is_binary or not np.all(y.sum(axis=1) == 1.0):
        raise ValueError("Cross-entropy targets must be one-hot rows")


def task_loss(kind: TaskLossKind, y: np.ndarray, outputs: Var, tape: Tape) -> Var:
    """
    Task loss L_T on a batch.

    Args:
        kind: ``cross_entropy`` (outputs are logits) or ``squared_error``
            (outputs are predictions)
        y: Targets, shape (batch, C); one-hot for cross-entropy
        outputs: Logits or predictions on ``tape``
        tape: Tape to record on

    Returns:
        Scalar Var: mean over the batch of -sum y log softmax, or mean
        squared error over batch and channels
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != outputs.shape or y.ndim != 2:
        raise ShapeError(f"Targets {y.shape} do not match outputs {outputs.shape}")
    target = tape.constant(y)
    if kind is TaskLossKind.CROSS_ENTROPY:
        _check_one_hot(y)
        return -((target * log_softmax(outputs)).sum(axis=1).mean())
    residual = target - outputs
    return (residual * residual).mean()


def task_loss_value(kind: TaskLossKind, y: np.ndarray, outputs: np.ndarray) -> float:
    """Tape-free ``task_loss`` for evaluation over whole splits."""
    y = np.asarray(y, dtype=np.float64)
    outputs = np.asarray(outputs, dtype=np.float64)
    if y.shape != outputs.shape:
        raise ShapeError(f"Targets {y.shape} do not match outputs {outputs.shape}")
    if kind is TaskLossKind.CROSS_ENTROPY:
        log_probs = outputs - logsumexp(outputs, axis=1, keepdims=True)
        return float(-np.mean(np.sum(y * log_probs, axis=1)))
    return float(np.mean((y - outputs) ** 2))


def output_transform(kind: TaskLossKind, outputs: Var) -> Var:
    """What the loss network sees as predictions: softmax probabilities or raw outputs."""
    if kind is TaskLossKind.CROSS_ENTROPY:
        return softmax(outputs)
    return outputs


def error_rate(y: np.ndarray, logits: np.ndarray) -> float:
    """
    Fraction of rows whose argmax prediction differs from the argmax target.

    Ties resolve to the lowest index on both sides.
    """
    y = np.asarray(y)
    logits = np.asarray(logits)
    if y.shape != logits.shape or y.ndim != 2:
        raise ShapeError(f"Targets {y.shape} do not match logits {logits.shape}")
    if y.shape[0] == 0:
        raise ValueError("error_rate needs at least one row")
    return float(np.mean(np.argmax(logits, axis=1) != np.argmax(y, axis=1)))
