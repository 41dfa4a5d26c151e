"""Tests for base learners, task losses and the error-rate metric."""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import softmax

from src.config.constants import ArchKind, TaskLossKind
from src.data import one_hot
from src.models import (
    ModelSpec,
    error_rate,
    init_base_learner,
    model_forward,
    predict,
    task_loss,
    task_loss_value,
    theta_digest,
)
from src.ndtensor import ShapeError, Tape, gradients

MLP = ModelSpec(kind=ArchKind.MLP, in_dim=5, n_classes=3, hidden_dims=(4, 4))


def test_param_shapes():
    assert ModelSpec().param_shapes == [(784, 10), (10,)]
    assert MLP.param_shapes == [(5, 4), (4,), (4, 4), (4,), (4, 3), (3,)]
    with pytest.raises(ValidationError):
        ModelSpec(kind=ArchKind.MLP, hidden_dims=())


def test_init_depends_on_seed_only():
    a = init_base_learner(MLP, seed=7)
    b = init_base_learner(MLP, seed=7)
    assert theta_digest(a) == theta_digest(b)
    assert theta_digest(a) != theta_digest(init_base_learner(MLP, seed=8))


def test_zero_logistic_gives_zero_logits():
    spec = ModelSpec(in_dim=4, n_classes=3)
    model = init_base_learner(spec, 0).with_parameters([np.zeros((4, 3)), np.zeros(3)])
    logits = model_forward(model, np.random.default_rng(0).normal(size=(6, 4)), Tape())
    assert np.array_equal(logits.value, np.zeros((6, 3)))


def test_mlp_zero_final_layer():
    model = init_base_learner(MLP, 1)
    theta = list(model.theta)
    theta[-2], theta[-1] = np.zeros((4, 3)), np.zeros(3)
    logits = model_forward(model.with_parameters(theta), np.ones((2, 5)), Tape())
    assert np.array_equal(logits.value, np.zeros((2, 3)))


def test_rows_are_independent():
    model = init_base_learner(MLP, 2)
    x = np.random.default_rng(3).normal(size=(8, 5))
    full = model_forward(model, x, Tape()).value
    single = model_forward(model, x[3:4], Tape()).value
    np.testing.assert_allclose(single[0], full[3], rtol=1e-14)


def test_predict_matches_tape_forward():
    model = init_base_learner(MLP, 4)
    x = np.random.default_rng(4).normal(size=(3, 5))
    np.testing.assert_allclose(predict(model, x), model_forward(model, x, Tape()).value)


def test_input_width_checked():
    with pytest.raises(ShapeError):
        predict(init_base_learner(MLP, 0), np.ones((2, 4)))
    with pytest.raises(ShapeError):
        init_base_learner(MLP, 0).with_parameters([np.zeros(3)])


def test_cross_entropy_of_uniform_logits():
    tape = Tape()
    y = one_hot(np.arange(10), 10)
    loss = task_loss(TaskLossKind.CROSS_ENTROPY, y, tape.leaf(np.zeros((10, 10))), tape)
    assert loss.item() == pytest.approx(math.log(10.0), abs=1e-12)
    assert loss.item() == pytest.approx(2.302585, abs=1e-6)


def test_squared_error_of_identical():
    tape = Tape()
    y = np.random.default_rng(0).normal(size=(4, 2))
    assert task_loss(TaskLossKind.SQUARED_ERROR, y, tape.leaf(y), tape).item() == 0.0


def test_cross_entropy_decreases_with_true_logit():
    y = one_hot(np.array([1]), 3)
    values = []
    for true_logit in (0.0, 1.0, 2.0):
        logits = np.array([[0.5, true_logit, -0.5]])
        values.append(task_loss_value(TaskLossKind.CROSS_ENTROPY, y, logits))
    assert values[0] > values[1] > values[2]


def test_cross_entropy_needs_one_hot():
    tape = Tape()
    logits = tape.leaf(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        task_loss(TaskLossKind.CROSS_ENTROPY, np.full((2, 2), 0.5), logits, tape)


def test_tape_and_numpy_losses_agree():
    rng = np.random.default_rng(5)
    y = one_hot(rng.integers(0, 4, size=6), 4)
    logits = rng.normal(size=(6, 4))
    tape = Tape()
    for kind in TaskLossKind:
        on_tape = task_loss(kind, y, tape.leaf(logits), tape).item()
        assert on_tape == pytest.approx(task_loss_value(kind, y, logits), rel=1e-12)


def test_cross_entropy_gradient_is_softmax_minus_target():
    rng = np.random.default_rng(8)
    y = one_hot(rng.integers(0, 5, size=9), 5)
    logits = rng.normal(scale=3.0, size=(9, 5))
    tape = Tape()
    var = tape.leaf(logits)
    (grad,) = gradients(tape, task_loss(TaskLossKind.CROSS_ENTROPY, y, var, tape), [var])
    np.testing.assert_allclose(grad, (softmax(logits, axis=1) - y) / 9, rtol=0.0, atol=1e-8)


def test_error_rate():
    y = one_hot(np.array([0, 1, 1, 0]), 2)
    assert error_rate(y, y) == 0.0
    assert error_rate(y, 1.0 - y) == 1.0
    assert error_rate(one_hot(np.zeros(5, dtype=int), 3), np.zeros((5, 3))) == 0.0
    with pytest.raises(ShapeError):
        error_rate(y, np.zeros((4, 3)))
