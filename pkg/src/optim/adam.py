"""Bias-corrected Adam for the loss-network parameters."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON, ETA_ONLINE
from src.ndtensor import NonFiniteError, ShapeError


class AdamConfig(BaseModel):
    """Meta optimizer hyperparameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eta: float = Field(default=ETA_ONLINE, ge=0.0, description="Meta learning rate")
    beta1: float = Field(default=ADAM_BETA1, ge=0.0, lt=1.0)
    beta2: float = Field(default=ADAM_BETA2, ge=0.0, lt=1.0)
    epsilon: float = Field(default=ADAM_EPSILON, gt=0.0)


@dataclass(frozen=True)
class AdamState:
    """First and second moment estimates plus the step counter."""

    m: tuple[np.ndarray, ...]
    v: tuple[np.ndarray, ...]
    step: int = 0


def init_adam_state(params: Sequence[np.ndarray]) -> AdamState:
    zeros = tuple(np.zeros(np.shape(p)) for p in params)
    return AdamState(m=zeros, v=tuple(z.copy() for z in zeros), step=0)


def adam_step(
    phi: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    cfg: AdamConfig,
    state: AdamState,
) -> tuple[list[np.ndarray], AdamState]:
    """
    One Adam update with bias correction.

    Returns:
        Updated parameters and the new state (step counter incremented)
    """
    if not (len(phi) == len(grads) == len(state.m)):
        raise ShapeError("Parameter, gradient and moment counts differ")

    step = state.step + 1
    correction1 = 1.0 - cfg.beta1**step
    correction2 = 1.0 - cfg.beta2**step
    new_phi, new_m, new_v = [], [], []
    for index, (p, g, m, v) in enumerate(zip(phi, grads, state.m, state.v)):
        g = np.asarray(g, dtype=np.float64)
        if np.shape(p) != g.shape:
            raise ShapeError(f"Parameter {np.shape(p)} and gradient {g.shape} differ")
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(v))):
            raise NonFiniteError("adam_step", f"moments of parameter tensor {index}")
        update = (m / correction1) / (np.sqrt(v / correction2) + cfg.epsilon)
        new_phi.append(np.asarray(p, dtype=np.float64) - cfg.eta * update)
        new_m.append(m)
        new_v.append(v)
    return new_phi, AdamState(m=tuple(new_m), v=tuple(new_v), step=step)
