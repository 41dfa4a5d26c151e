"""
Activation functions: smooth leaky ReLU, ReLU, leaky ReLU and softplus.

Each function has a closed-form numpy version (scalars or arrays), an exact
derivative, and a tape version used inside networks.
"""

from typing import Union

import numpy as np
from scipy.special import expit

from src.activations.config import ActivationConfig
from src.config.constants import ActivationKind, SMOOTH_LEAKY_GAMMA
from src.ndtensor import Var, maximum, softplus_unit, stable_softplus

ArrayLike = Union[float, np.ndarray]


def _result(values: np.ndarray, x: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(x) == 0 else values


def softplus(x: ArrayLike, beta: float = 1.0) -> ArrayLike:
    """(1/beta) * log(e^{beta x} + 1), overflow-free."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    z = np.asarray(x, dtype=np.float64)
    return _result(stable_softplus(beta * z) / beta, x)


def relu(x: ArrayLike) -> ArrayLike:
    z = np.asarray(x, dtype=np.float64)
    return _result(np.maximum(z, 0.0), x)


def leaky_relu(x: ArrayLike, gamma: float = SMOOTH_LEAKY_GAMMA) -> ArrayLike:
    """max(gamma * x, x) for 0 <= gamma < 1."""
    z = np.asarray(x, dtype=np.float64)
    return _result(np.maximum(gamma * z, z), x)


def sigmoid(x: ArrayLike) -> ArrayLike:
    return _result(expit(np.asarray(x, dtype=np.float64)), x)


def smooth_leaky_relu(x: ArrayLike, cfg: ActivationConfig = ActivationConfig()) -> ArrayLike:
    """
    Smooth leaky ReLU: (1/beta) * softplus(beta x) * (1 - gamma) + gamma x.

    Linear with slope gamma as x -> -inf and slope 1 as x -> +inf; the softplus
    term switches to its asymptotic form for beta x > 30.
    """
    z = np.asarray(x, dtype=np.float64)
    smooth = stable_softplus(cfg.beta * z) / cfg.beta
    return _result(smooth * (1.0 - cfg.gamma) + cfg.gamma * z, x)


def smooth_leaky_relu_deriv(x: ArrayLike, cfg: ActivationConfig = ActivationConfig()) -> ArrayLike:
    """(e^{beta x} + gamma) / (e^{beta x} + 1), evaluated as gamma + (1 - gamma) sigmoid(beta x)."""
    z = np.asarray(x, dtype=np.float64)
    return _result(cfg.gamma + (1.0 - cfg.gamma) * expit(cfg.beta * z), x)


def activate(x: ArrayLike, cfg: ActivationConfig) -> ArrayLike:
    """Evaluate the activation named by ``cfg`` on plain values."""
    if cfg.kind is ActivationKind.SMOOTH_LEAKY_RELU:
        return smooth_leaky_relu(x, cfg)
    if cfg.kind is ActivationKind.RELU:
        return relu(x)
    if cfg.kind is ActivationKind.LEAKY_RELU:
        return leaky_relu(x, cfg.gamma)
    if cfg.kind is ActivationKind.SOFTPLUS:
        return softplus(x, cfg.beta)
    return _result(np.array(x, dtype=np.float64), x)


def activation_derivative(x: ArrayLike, cfg: ActivationConfig) -> ArrayLike:
    """Exact derivative of ``activate`` (ReLU-family kinks take the right-hand value at 0 as 0)."""
    z = np.asarray(x, dtype=np.float64)
    if cfg.kind is ActivationKind.SMOOTH_LEAKY_RELU:
        return smooth_leaky_relu_deriv(x, cfg)
    if cfg.kind is ActivationKind.RELU:
        return _result((z > 0).astype(np.float64), x)
    if cfg.kind is ActivationKind.LEAKY_RELU:
        return _result(np.where(z > 0, 1.0, cfg.gamma), x)
    if cfg.kind is ActivationKind.SOFTPLUS:
        return _result(expit(cfg.beta * z), x)
    return _result(np.ones_like(z), x)


def apply_activation(x: Var, cfg: ActivationConfig) -> Var:
    """Tape version of ``activate``; every branch stays differentiable to any order."""
    if cfg.kind is ActivationKind.SMOOTH_LEAKY_RELU:
        smooth = softplus_unit(x * cfg.beta) * ((1.0 - cfg.gamma) / cfg.beta)
        return smooth + x * cfg.gamma
    if cfg.kind is ActivationKind.RELU:
        return maximum(x, 0.0)
    if cfg.kind is ActivationKind.LEAKY_RELU:
        return x * cfg.gamma + maximum(x, 0.0) * (1.0 - cfg.gamma)
    if cfg.kind is ActivationKind.SOFTPLUS:
        return softplus_unit(x * cfg.beta) * (1.0 / cfg.beta)
    return x
