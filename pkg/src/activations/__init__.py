"""Activation function family used by the loss network and base learners."""

from src.activations.config import ActivationConfig
from src.activations.functions import (
    activate,
    activation_derivative,
    apply_activation,
    leaky_relu,
    relu,
    sigmoid,
    smooth_leaky_relu,
    smooth_leaky_relu_deriv,
    softplus,
)

__all__ = [
    "ActivationConfig",
    "activate",
    "activation_derivative",
    "apply_activation",
    "leaky_relu",
    "relu",
    "sigmoid",
    "smooth_leaky_relu",
    "smooth_leaky_relu_deriv",
    "softplus",
]
