"""Tests for the activation family and its derivatives."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.activations import (
    ActivationConfig,
    activate,
    activation_derivative,
    apply_activation,
    leaky_relu,
    relu,
    smooth_leaky_relu,
    smooth_leaky_relu_deriv,
    softplus,
)
from src.config.constants import ActivationKind
from src.ndtensor import Tape, gradients

GRID = np.round(np.arange(-1000, 1001) * 0.01, 2)


def test_config_defaults_and_bounds():
    cfg = ActivationConfig()
    assert cfg.kind is ActivationKind.SMOOTH_LEAKY_RELU
    assert (cfg.gamma, cfg.beta) == (0.01, 10.0)
    with pytest.raises(ValidationError):
        ActivationConfig(beta=0.0)
    with pytest.raises(ValidationError):
        ActivationConfig(gamma=1.0)


def test_smooth_leaky_relu_values():
    assert smooth_leaky_relu(0.0) == pytest.approx(math.log(2.0) / 10.0 * 0.99, abs=1e-12)
    assert smooth_leaky_relu(0.0) == pytest.approx(0.0686216, abs=1e-6)
    assert smooth_leaky_relu(-100.0) == pytest.approx(-1.0, abs=1e-12)
    assert smooth_leaky_relu(100.0) == pytest.approx(100.0, abs=1e-12)


def test_smooth_leaky_relu_large_inputs_stay_finite():
    values = smooth_leaky_relu(np.array([-1e6, 1e6]))
    assert np.all(np.isfinite(values))


def test_derivative_values():
    for beta in (1.0, 10.0, 3.0):
        cfg = ActivationConfig(beta=beta, gamma=0.01)
        assert smooth_leaky_relu_deriv(0.0, cfg) == pytest.approx(0.505, abs=1e-15)
    assert smooth_leaky_relu_deriv(-1e4) == pytest.approx(0.01)
    assert smooth_leaky_relu_deriv(1e4) == pytest.approx(1.0)


def test_derivative_matches_finite_difference_at_point():
    cfg = ActivationConfig(beta=10.0, gamma=0.01)
    h = 1e-6
    numeric = (smooth_leaky_relu(0.3 + h, cfg) - smooth_leaky_relu(0.3 - h, cfg)) / (2 * h)
    assert smooth_leaky_relu_deriv(0.3, cfg) == pytest.approx(numeric, abs=1e-8)


@pytest.mark.parametrize("beta", [1.0, 10.0])
@pytest.mark.parametrize("gamma", [0.01, 0.1])
def test_derivative_over_grid(beta, gamma):
    cfg = ActivationConfig(beta=beta, gamma=gamma)
    h = 1e-5
    numeric = (smooth_leaky_relu(GRID + h, cfg) - smooth_leaky_relu(GRID - h, cfg)) / (2 * h)
    deriv = smooth_leaky_relu_deriv(GRID, cfg)
    assert np.max(np.abs(deriv - numeric)) <= 1e-8

    assert np.all(deriv >= gamma) and np.all(deriv <= 1.0)
    # strict wherever the sigmoid term is representable next to gamma and 1
    interior = np.abs(beta * GRID) <= 30.0
    assert np.all(deriv[interior] > gamma) and np.all(deriv[interior] < 1.0)


@pytest.mark.parametrize("gamma", [0.01, 0.1])
def test_smooth_leaky_derivative_never_vanishes(gamma):
    x = np.linspace(-50.0, 50.0, 100001)
    cfg = ActivationConfig(gamma=gamma)
    assert np.all(activation_derivative(x, cfg) > gamma / 2)


def test_relu_derivative_vanishes_where_smooth_leaky_does_not():
    x = np.linspace(-50.0, 50.0, 100001)
    relu_deriv = activation_derivative(x, ActivationConfig(kind=ActivationKind.RELU))
    smooth_deriv = activation_derivative(x, ActivationConfig())
    assert np.all(relu_deriv[x < 0] == 0.0)
    assert np.all(relu_deriv[x > 0] == 1.0)
    assert np.all(smooth_deriv >= 0.01)


@pytest.mark.parametrize("beta", [1.0, 10.0])
def test_softplus_bounds(beta):
    x = np.linspace(-50.0, 50.0, 10001)
    values = softplus(x, beta)
    assert np.all(values >= 0.0)
    assert np.all(values >= x)


def test_basic_activations():
    assert softplus(0.0, beta=1.0) == pytest.approx(math.log(2.0))
    assert softplus(1000.0, beta=1.0) == pytest.approx(1000.0)
    assert relu(-5.0) == 0.0
    assert leaky_relu(-5.0, 0.01) == pytest.approx(-0.05)
    with pytest.raises(ValueError):
        softplus(1.0, beta=-1.0)


def test_scalar_in_scalar_out():
    assert isinstance(smooth_leaky_relu(0.5), float)
    assert isinstance(smooth_leaky_relu(np.array([0.5])), np.ndarray)


@pytest.mark.parametrize("kind", list(ActivationKind))
def test_tape_version_matches_numpy(kind):
    cfg = ActivationConfig(kind=kind, beta=2.0, gamma=0.1)
    x = np.linspace(-3.0, 3.0, 13) + 0.05
    tape = Tape()
    var = tape.leaf(x)
    out = apply_activation(var, cfg)
    np.testing.assert_allclose(out.value, activate(x, cfg), rtol=1e-12, atol=1e-14)

    (grad,) = gradients(tape, out.sum(), [var])
    np.testing.assert_allclose(grad, activation_derivative(x, cfg), rtol=1e-10, atol=1e-14)
