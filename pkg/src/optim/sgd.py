"""SGD with optional momentum, Nesterov momentum and L2 weight decay."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import BASE_LEARNING_RATE
from src.ndtensor import NonFiniteError, ShapeError


class SgdConfig(BaseModel):
    """Base optimizer hyperparameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(default=BASE_LEARNING_RATE, ge=0.0, description="Base learning rate")
    momentum: float = Field(default=0.0, ge=0.0)
    nesterov: bool = False
    weight_decay: float = Field(default=0.0, ge=0.0)

    @property
    def is_plain(self) -> bool:
        """True when a step is exactly theta - alpha * g."""
        return self.momentum == 0.0 and self.weight_decay == 0.0


@dataclass(frozen=True)
class SgdState:
    """Momentum buffers, one per parameter tensor (None until the first step)."""

    velocity: Optional[tuple[np.ndarray, ...]] = None


def _check_shapes(params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
    if len(params) != len(grads):
        raise ShapeError(f"{len(params)} parameters but {len(grads)} gradients")
    for p, g in zip(params, grads):
        if np.shape(p) != np.shape(g):
            raise ShapeError(f"Parameter {np.shape(p)} and gradient {np.shape(g)} differ")


def sgd_step(
    theta: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    cfg: SgdConfig,
    state: SgdState = SgdState(),
) -> tuple[list[np.ndarray], SgdState]:
    """
    One SGD update.

    g <- g + weight_decay * theta; then v <- momentum * v + g (if momentum > 0);
    the step direction is v, or g + momentum * v with Nesterov; theta <- theta - alpha * step.

    Returns:
        Updated parameters and the new optimizer state
    """
    _check_shapes(theta, grads)
    if state.velocity is not None:
        _check_shapes(theta, state.velocity)

    new_theta: list[np.ndarray] = []
    new_velocity: list[np.ndarray] = []
    for index, (p, g) in enumerate(zip(theta, grads)):
        p = np.asarray(p, dtype=np.float64)
        g = np.asarray(g, dtype=np.float64)
        if cfg.weight_decay:
            g = g + cfg.weight_decay * p
        if cfg.momentum:
            previous = state.velocity[index] if state.velocity is not None else np.zeros_like(p)
            v = cfg.momentum * previous + g
            direction = g + cfg.momentum * v if cfg.nesterov else v
            new_velocity.append(v)
        else:
            direction = g
        updated = p - cfg.alpha * direction
        if not np.all(np.isfinite(updated)):
            raise NonFiniteError("sgd_step", f"parameter tensor {index}")
        new_theta.append(updated)

    velocity = tuple(new_velocity) if cfg.momentum else None
    return new_theta, SgdState(velocity=velocity)
