"""Tests for the tape, operation registry, backward pass and gradient oracles."""

import math

import numpy as np
import pytest

from src.ndtensor import (
    NonFiniteError,
    ShapeError,
    Tape,
    TapeError,
    backward,
    broadcast_rows,
    concat,
    cosine_similarity,
    finite_diff_grad,
    forward_op,
    gradients,
    log_softmax,
    logsumexp_op,
    max_relative_error,
    sigmoid,
    softmax,
    softplus_unit,
)


def test_matmul_shape():
    tape = Tape()
    a = tape.leaf(np.ones((2, 3)))
    b = tape.leaf(np.ones((3, 4)))
    assert (a @ b).shape == (2, 4)


def test_matmul_shape_mismatch_rejected():
    tape = Tape()
    with pytest.raises(ShapeError):
        tape.leaf(np.ones((2, 3))) @ tape.leaf(np.ones((2, 3)))


def test_elementwise_shape_mismatch_rejected():
    tape = Tape()
    with pytest.raises(ShapeError):
        tape.leaf(np.ones(3)) + tape.leaf(np.ones(2))


def test_sum():
    tape = Tape()
    assert tape.leaf([1.0, 2.0, 3.0]).sum().item() == 6.0


def test_logsumexp_no_overflow():
    tape = Tape()
    out = logsumexp_op(tape.leaf([1000.0, 1000.0]))
    assert out.item() == pytest.approx(1000.0 + math.log(2.0), abs=1e-12)


def test_overflow_is_an_error():
    tape = Tape()
    with pytest.raises(NonFiniteError):
        tape.leaf([1000.0]).exp()


def test_log_of_zero_is_an_error():
    tape = Tape()
    with pytest.raises(NonFiniteError):
        tape.leaf([0.0]).log()


def test_non_finite_input_rejected():
    with pytest.raises(NonFiniteError):
        Tape().leaf([np.nan])


def test_unknown_kind_and_arity():
    tape = Tape()
    x = tape.leaf(1.0)
    with pytest.raises(TapeError):
        forward_op(tape, "cosh", [x])
    with pytest.raises(TapeError):
        forward_op(tape, "add", [x])


def test_foreign_var_rejected():
    x = Tape().leaf(1.0)
    with pytest.raises(TapeError):
        Tape().leaf(1.0) + x


def test_values_are_read_only():
    tape = Tape()
    x = tape.leaf([1.0, 2.0])
    with pytest.raises(ValueError):
        x.value[0] = 5.0


def test_square_gradient():
    tape = Tape()
    x = tape.leaf(3.0)
    (grad,) = gradients(tape, x * x, [x])
    assert grad == pytest.approx(6.0)


def test_second_derivative_of_cube():
    tape = Tape()
    x = tape.leaf(2.0)
    (first,) = backward(tape, x * x * x, [x], record=True)
    assert first.item() == pytest.approx(12.0)
    (second,) = backward(tape, first, [x])
    assert second.item() == pytest.approx(12.0)


def test_mean_gradient():
    tape = Tape()
    x = tape.leaf(np.arange(5.0))
    (grad,) = gradients(tape, x.mean(), [x])
    np.testing.assert_allclose(grad, np.full(5, 0.2))


def test_recorded_backward_only_appends():
    tape = Tape()
    x = tape.leaf(2.0)
    y = (x * x).exp()
    before = tape.nodes
    backward(tape, y, [x], record=True)
    after = tape.nodes
    assert len(after) > len(before)
    for old, new in zip(before, after):
        assert old is new


def test_unrecorded_backward_leaves_tape_alone():
    tape = Tape()
    x = tape.leaf(2.0)
    y = x * x
    length = len(tape)
    backward(tape, y, [x], record=False)
    # only the returned constants are appended
    assert len(tape) == length + 1


def test_topological_order():
    tape = Tape()
    x = tape.leaf([1.0, 2.0])
    y = (x * x).sum()
    backward(tape, y, [x], record=True)
    for handle, node in enumerate(tape.nodes):
        assert all(i < handle for i in node.inputs)


def test_unreached_target_gets_zero():
    tape = Tape()
    x = tape.leaf([1.0, 2.0])
    z = tape.leaf(3.0)
    (grad,) = gradients(tape, x.sum(), [z])
    assert grad == 0.0


def test_backward_is_linear_in_the_output():
    p = np.random.default_rng(3).normal(size=(3, 2))
    a, b = 2.5, -0.75

    def f(x):
        return (x * x * x).sum()

    def g(x):
        return (sigmoid(x) * x).mean()

    def grad_of(build):
        tape = Tape()
        x = tape.leaf(p)
        (grad,) = gradients(tape, build(x), [x])
        return grad

    combined = grad_of(lambda x: f(x) * a + g(x) * b)
    separate = a * grad_of(f) + b * grad_of(g)
    np.testing.assert_allclose(combined, separate, rtol=1e-12, atol=1e-12)


def test_backward_needs_scalar_output():
    tape = Tape()
    x = tape.leaf([1.0, 2.0])
    with pytest.raises(TapeError):
        backward(tape, x * x, [x])


def _check_against_fd(build, p, tol=1e-6):
    """Compare tape gradients of build(var) -> scalar with central differences."""

    def f(v):
        tape = Tape()
        return build(tape.leaf(v.reshape(np.shape(p)))).item()

    tape = Tape()
    x = tape.leaf(p)
    (analytic,) = gradients(tape, build(x), [x])
    numeric = finite_diff_grad(f, np.asarray(p, dtype=np.float64).reshape(-1)).reshape(np.shape(p))
    assert max_relative_error(analytic, numeric) < tol


OP_CASES = {
    "div": lambda x: (x / (x * x + 1.0)).sum(),
    "transpose": lambda x: (x.T @ x).sum(),
    "reshape": lambda x: (x.reshape(6) * x.reshape(6)).sum(),
    "sigmoid": lambda x: sigmoid(x).sum(),
    "softplus": lambda x: softplus_unit(x * 3.0).sum(),
    "log_softmax": lambda x: log_softmax(x).sum(axis=1).mean() + softmax(x).sum(),
    "logsumexp": lambda x: logsumexp_op(x, axis=0).sum(),
    "concat": lambda x: (concat([x, x * x]) * concat([x, x])).sum(),
    "broadcast": lambda x: (broadcast_rows(x.sum(axis=0), 4) * 2.0).mean(),
    "sum_axis": lambda x: (x.sum(axis=1) * x.sum(axis=1)).sum(),
}


@pytest.mark.parametrize("name", sorted(OP_CASES))
def test_op_gradients_match_finite_differences(name):
    p = np.random.default_rng(0).normal(size=(2, 3))
    _check_against_fd(OP_CASES[name], p)


def test_hessian_vector_product_matches_finite_differences():
    rng = np.random.default_rng(1)
    p = rng.normal(size=4)
    v = rng.normal(size=4)

    def grad_at(point):
        tape = Tape()
        x = tape.leaf(point)
        (g,) = gradients(tape, softplus_unit(x * x).sum() + (x.exp() * x).sum(), [x])
        return g

    tape = Tape()
    x = tape.leaf(p)
    (g,) = backward(tape, softplus_unit(x * x).sum() + (x.exp() * x).sum(), [x], record=True)
    (hv,) = gradients(tape, (g * tape.constant(v)).sum(), [x])

    h = 1e-5
    numeric = (grad_at(p + h * v) - grad_at(p - h * v)) / (2 * h)
    np.testing.assert_allclose(hv, numeric, rtol=1e-6, atol=1e-8)


def test_finite_diff_sum_of_squares():
    grad = finite_diff_grad(lambda p: float(np.sum(p**2)), np.array([1.0, 2.0]), h=1e-5)
    np.testing.assert_allclose(grad, [2.0, 4.0], atol=1e-8)


def test_finite_diff_constant():
    grad = finite_diff_grad(lambda p: 3.0, np.array([1.0, -1.0, 0.5]))
    np.testing.assert_array_equal(grad, np.zeros(3))


def test_finite_diff_smooth_leaky_relu_at_zero():
    from src.activations import smooth_leaky_relu

    grad = finite_diff_grad(lambda p: float(np.sum(smooth_leaky_relu(p))), np.array([0.0]))
    assert grad[0] == pytest.approx(0.505, abs=1e-8)


def test_finite_diff_rejects_bad_step():
    with pytest.raises(ValueError):
        finite_diff_grad(lambda p: 0.0, np.zeros(2), h=0.0)


def test_error_measures():
    a = np.array([1.0, 2.0, 3.0])
    assert max_relative_error(a, a) == 0.0
    assert cosine_similarity(a, 2 * a) == pytest.approx(1.0)
    assert cosine_similarity(a, -a) == pytest.approx(-1.0)
