"""Tests for SGD and Adam updates."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.ndtensor import NonFiniteError, ShapeError
from src.optim import AdamConfig, SgdConfig, SgdState, adam_step, init_adam_state, sgd_step


def test_zero_gradient_leaves_theta():
    theta = [np.array([1.0, -2.0])]
    new, _ = sgd_step(theta, [np.zeros(2)], SgdConfig(alpha=0.5))
    assert np.array_equal(new[0], theta[0])


def test_plain_step():
    new, state = sgd_step([np.array(1.0)], [np.array(0.5)], SgdConfig(alpha=0.1))
    assert float(new[0]) == pytest.approx(0.95)
    assert state.velocity is None


def test_momentum_two_steps():
    cfg = SgdConfig(alpha=0.1, momentum=0.9)
    theta, state = [np.array(0.0)], SgdState()
    theta, state = sgd_step(theta, [np.array(1.0)], cfg, state)
    assert float(theta[0]) == pytest.approx(-0.1)
    theta, state = sgd_step(theta, [np.array(1.0)], cfg, state)
    assert float(theta[0]) == pytest.approx(-0.29)


def test_nesterov_and_weight_decay():
    cfg = SgdConfig(alpha=0.1, momentum=0.5, nesterov=True, weight_decay=0.1)
    new, _ = sgd_step([np.array(1.0)], [np.array(0.0)], cfg)
    # g = 0.1, v = 0.1, step = g + 0.5 v = 0.15
    assert float(new[0]) == pytest.approx(0.985)
    assert not cfg.is_plain and SgdConfig().is_plain


def test_sgd_shape_and_finite_checks():
    with pytest.raises(ShapeError):
        sgd_step([np.zeros(2)], [np.zeros(3)], SgdConfig())
    with pytest.raises(NonFiniteError):
        sgd_step([np.array([1e308])], [np.array([-1e308])], SgdConfig(alpha=10.0))


def test_config_validation():
    with pytest.raises(ValidationError):
        SgdConfig(alpha=-1.0)
    with pytest.raises(ValidationError):
        AdamConfig(beta1=1.0)


def test_adam_first_step_moves_by_eta():
    phi = [np.array([1.0, -1.0, 0.0])]
    cfg = AdamConfig(eta=1e-3)
    new, state = adam_step(phi, [np.array([0.3, -2.0, 5.0])], cfg, init_adam_state(phi))
    np.testing.assert_allclose(new[0] - phi[0], [-1e-3, 1e-3, -1e-3], rtol=1e-6)
    assert state.step == 1


def test_adam_first_step_scale_invariant():
    phi = [np.array([0.5, 0.5])]
    cfg = AdamConfig(eta=1e-2)
    g = np.array([0.2, -0.7])
    small, _ = adam_step(phi, [g], cfg, init_adam_state(phi))
    large, _ = adam_step(phi, [10 * g], cfg, init_adam_state(phi))
    np.testing.assert_allclose(small[0], large[0], atol=1e-8)


def test_adam_zero_gradient_forever():
    phi = [np.array([0.25, -4.0])]
    state = init_adam_state(phi)
    current = phi
    for _ in range(20):
        current, state = adam_step(current, [np.zeros(2)], AdamConfig(eta=0.1), state)
    assert np.array_equal(current[0], phi[0])
