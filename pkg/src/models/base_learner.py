"""Base learners: logistic/linear regression and a multilayer perceptron."""

import hashlib
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.activations import ActivationConfig, activate, apply_activation
from src.config.constants import ActivationKind, ArchKind, MNIST_CLASSES
from src.ndtensor import ShapeError, Tape, Var, broadcast_rows


class ModelSpec(BaseModel):
    """Architecture of a base learner."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ArchKind = ArchKind.LOGISTIC
    in_dim: int = Field(default=784, ge=1)
    n_classes: int = Field(default=MNIST_CLASSES, ge=1, description="Output channels")
    hidden_dims: tuple[int, ...] = (100, 100)
    hidden_activation: ActivationConfig = ActivationConfig(kind=ActivationKind.RELU)

    @model_validator(mode="after")
    def _check_hidden(self) -> "ModelSpec":
        if self.kind is ArchKind.MLP and (not self.hidden_dims or min(self.hidden_dims) < 1):
            raise ValueError("MLP needs at least one positive hidden width")
        return self

    @property
    def layer_dims(self) -> list[int]:
        if self.kind is ArchKind.MLP:
            return [self.in_dim, *self.hidden_dims, self.n_classes]
        return [self.in_dim, self.n_classes]

    @property
    def param_shapes(self) -> list[tuple[int, ...]]:
        dims = self.layer_dims
        shapes: list[tuple[int, ...]] = []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            shapes.extend([(fan_in, fan_out), (fan_out,)])
        return shapes


@dataclass(frozen=True)
class BaseLearner:
    """Base model f_theta: architecture plus parameters (W, b per layer)."""

    spec: ModelSpec
    theta: tuple[np.ndarray, ...]

    def with_parameters(self, theta: Sequence[np.ndarray]) -> "BaseLearner":
        new_theta = tuple(np.array(t, dtype=np.float64) for t in theta)
        if [t.shape for t in new_theta] != self.spec.param_shapes:
            raise ShapeError("Parameter shapes do not match the architecture")
        return replace(self, theta=new_theta)

    @property
    def parameter_count(self) -> int:
        return int(sum(t.size for t in self.theta))


def init_base_learner(spec: ModelSpec, seed: Union[int, Sequence[int]]) -> BaseLearner:
    """
    Draw initial parameters from ``seed`` alone.

    Weights are uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero, so
    every training mode sharing a seed starts from identical parameters.
    """
    rng = np.random.default_rng(seed)
    theta = []
    for shape in spec.param_shapes:
        if len(shape) == 2:
            bound = 1.0 / np.sqrt(shape[0])
            theta.append(rng.uniform(-bound, bound, size=shape))
        else:
            theta.append(np.zeros(shape))
    return BaseLearner(spec=spec, theta=tuple(theta))


def model_forward(
    model: BaseLearner,
    x: np.ndarray,
    tape: Tape,
    theta: Optional[Sequence[Var]] = None,
) -> Var:
    """
    Logits (or raw regression outputs) for a batch, recorded on ``tape``.

    Args:
        model: Architecture and default parameters
        x: Inputs, shape (batch, in_dim)
        tape: Tape to record on
        theta: Parameter Vars to use instead of ``model.theta``

    Returns:
        Var of shape (batch, n_classes)
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.spec.in_dim:
        raise ShapeError(f"Expected inputs (batch, {model.spec.in_dim}), got {x.shape}")
    params = list(theta) if theta is not None else [tape.constant(t) for t in model.theta]
    batch = x.shape[0]
    h = tape.constant(x)
    n_layers = len(params) // 2
    for index in range(n_layers):
        weight, bias = params[2 * index], params[2 * index + 1]
        h = h @ weight + broadcast_rows(bias, batch)
        if index < n_layers - 1:
            h = apply_activation(h, model.spec.hidden_activation)
    return h


def predict(model: BaseLearner, x: np.ndarray) -> np.ndarray:
    """Tape-free forward pass for evaluation."""
    h = np.asarray(x, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] != model.spec.in_dim:
        raise ShapeError(f"Expected inputs (batch, {model.spec.in_dim}), got {h.shape}")
    n_layers = len(model.theta) // 2
    for index in range(n_layers):
        h = h @ model.theta[2 * index] + model.theta[2 * index + 1]
        if index < n_layers - 1:
            h = activate(h, model.spec.hidden_activation)
    return h


def theta_digest(model: BaseLearner) -> str:
    """SHA-256 over the raw parameter bytes."""
    digest = hashlib.sha256()
    for t in model.theta:
        digest.update(np.ascontiguousarray(t, dtype=np.float64).tobytes())
    return digest.hexdigest()
