"""
Operation registry for the tape.

Every kind has a numpy forward kernel, a shape check and a vector-Jacobian
product. The VJPs are written with tape operations themselves, so running
them on the tape being differentiated records the backward pass and makes it
differentiable again.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import expit, logsumexp

from src.config.constants import SOFTPLUS_STABLE_THRESHOLD
from src.ndtensor.errors import NonFiniteError, ShapeError, TapeError
from src.ndtensor.tape import Tape, Tensor, Var

ForwardFn = Callable[[list[Tensor], dict], Tensor]
VjpFn = Callable[[Var, list[Var], Var, dict], list[Optional[Var]]]
CheckFn = Callable[[list[Tensor], dict], dict]


@dataclass(frozen=True)
class OpDef:
    """Forward kernel, shape check and VJP for one operation kind."""

    arity: Optional[int]
    forward: ForwardFn
    vjp: VjpFn
    check: CheckFn


def stable_softplus(z: Tensor) -> Tensor:
    """log(1 + e^z) with the asymptotic branch z + log1p(e^-z) above the threshold."""
    z = np.asarray(z, dtype=np.float64)
    high = z > SOFTPLUS_STABLE_THRESHOLD
    safe = np.where(high, 0.0, z)
    return np.where(high, z + np.log1p(np.exp(-np.abs(z))), np.log1p(np.exp(safe)))


def _normalize_axis(axis: Optional[int], ndim: int) -> Optional[int]:
    if axis is None:
        return None
    if not -ndim <= axis < ndim:
        raise ShapeError(f"axis {axis} out of range for {ndim}-d operand")
    return axis % ndim


# --- shape checks --------------------------------------------------------


def _same_shape(values: list[Tensor], attrs: dict) -> dict:
    a, b = values
    if a.shape != b.shape:
        raise ShapeError(f"operand shapes differ: {a.shape} vs {b.shape}")
    return attrs


def _any_shape(values: list[Tensor], attrs: dict) -> dict:
    return attrs


def _check_matmul(values: list[Tensor], attrs: dict) -> dict:
    a, b = values
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul needs (m,k)x(k,n), got {a.shape} x {b.shape}")
    return attrs


def _check_transpose(values: list[Tensor], attrs: dict) -> dict:
    if values[0].ndim != 2:
        raise ShapeError(f"transpose needs a 2-d operand, got {values[0].shape}")
    return attrs


def _check_reduce(values: list[Tensor], attrs: dict) -> dict:
    return {**attrs, "axis": _normalize_axis(attrs.get("axis"), values[0].ndim)}


def _check_logsumexp(values: list[Tensor], attrs: dict) -> dict:
    if values[0].ndim == 0:
        raise ShapeError("logsumexp needs at least one axis")
    axis = attrs.get("axis")
    return {**attrs, "axis": _normalize_axis(-1 if axis is None else axis, values[0].ndim)}


def _check_broadcast(values: list[Tensor], attrs: dict) -> dict:
    ndim = values[0].ndim
    axis = attrs["axis"]
    if not 0 <= axis <= ndim:
        raise ShapeError(f"cannot insert axis {axis} into {ndim}-d operand")
    if attrs["size"] < 1:
        raise ShapeError("broadcast size must be positive")
    return attrs


def _check_fill(values: list[Tensor], attrs: dict) -> dict:
    if values[0].shape != ():
        raise ShapeError(f"fill needs a scalar operand, got {values[0].shape}")
    return {**attrs, "shape": tuple(attrs["shape"])}


def _check_reshape(values: list[Tensor], attrs: dict) -> dict:
    try:
        resolved = np.empty(values[0].shape).reshape(attrs["shape"]).shape
    except ValueError as e:
        raise ShapeError(str(e)) from e
    return {**attrs, "shape": resolved, "source_shape": values[0].shape}


def _check_concat(values: list[Tensor], attrs: dict) -> dict:
    if not values:
        raise ShapeError("concat needs at least one operand")
    lead = values[0].shape[:-1]
    for v in values:
        if v.ndim == 0 or v.shape[:-1] != lead:
            shapes = [x.shape for x in values]
            raise ShapeError(f"concat operands disagree on leading shape: {shapes}")
    return {**attrs, "widths": tuple(v.shape[-1] for v in values)}


def _check_slice(values: list[Tensor], attrs: dict) -> dict:
    width = values[0].shape[-1] if values[0].ndim else 0
    start, stop = attrs["start"], attrs["stop"]
    if not 0 <= start < stop <= width:
        raise ShapeError(f"slice [{start}:{stop}] outside last axis of width {width}")
    return {**attrs, "width": width}


# --- VJPs ----------------------------------------------------------------


def _vjp_add(g, inputs, out, attrs):
    return [g, g]


def _vjp_sub(g, inputs, out, attrs):
    return [g, forward_op(g.tape, "scale", [g], factor=-1.0)]


def _vjp_mul(g, inputs, out, attrs):
    a, b = inputs
    return [g * b, g * a]


def _vjp_div(g, inputs, out, attrs):
    a, b = inputs
    ga = g / b
    return [ga, -(ga * out)]


def _vjp_scale(g, inputs, out, attrs):
    return [g * attrs["factor"]]


def _vjp_shift(g, inputs, out, attrs):
    return [g]


def _vjp_matmul(g, inputs, out, attrs):
    a, b = inputs
    return [g @ b.T, a.T @ g]


def _vjp_transpose(g, inputs, out, attrs):
    return [g.T]


def _vjp_reshape(g, inputs, out, attrs):
    return [g.reshape(attrs["source_shape"])]


def _spread(g: Var, axis: Optional[int], shape: tuple[int, ...]) -> Var:
    """Undo a reduction: broadcast g back to ``shape`` along the reduced axis."""
    if axis is None:
        return forward_op(g.tape, "fill", [g], shape=shape)
    return forward_op(g.tape, "broadcast", [g], axis=axis, size=shape[axis])


def _vjp_sum(g, inputs, out, attrs):
    return [_spread(g, attrs["axis"], inputs[0].shape)]


def _vjp_mean(g, inputs, out, attrs):
    shape = inputs[0].shape
    count = int(np.prod(shape)) if attrs["axis"] is None else shape[attrs["axis"]]
    return [_spread(g * (1.0 / count), attrs["axis"], shape)]


def _vjp_broadcast(g, inputs, out, attrs):
    return [g.sum(axis=attrs["axis"])]


def _vjp_fill(g, inputs, out, attrs):
    return [g.sum()]


def _vjp_exp(g, inputs, out, attrs):
    return [g * out]


def _vjp_log(g, inputs, out, attrs):
    return [g / inputs[0]]


def _vjp_maximum(g, inputs, out, attrs):
    mask = (inputs[0].value > attrs["value"]).astype(np.float64)
    return [g * g.tape.constant(mask)]


def _vjp_sigmoid(g, inputs, out, attrs):
    return [g * (out * (1.0 - out))]


def _vjp_softplus(g, inputs, out, attrs):
    return [g * forward_op(g.tape, "sigmoid", [inputs[0]])]


def _vjp_concat(g, inputs, out, attrs):
    grads = []
    offset = 0
    for width in attrs["widths"]:
        grads.append(forward_op(g.tape, "slice", [g], start=offset, stop=offset + width))
        offset += width
    return grads


def _vjp_slice(g, inputs, out, attrs):
    lead = g.shape[:-1]
    parts = []
    if attrs["start"] > 0:
        parts.append(g.tape.constant(np.zeros(lead + (attrs["start"],))))
    parts.append(g)
    if attrs["stop"] < attrs["width"]:
        parts.append(g.tape.constant(np.zeros(lead + (attrs["width"] - attrs["stop"],))))
    if len(parts) == 1:
        return [g]
    return [forward_op(g.tape, "concat", parts)]


def _vjp_logsumexp(g, inputs, out, attrs):
    axis = attrs["axis"]
    size = inputs[0].shape[axis]
    expanded = forward_op(out.tape, "broadcast", [out], axis=axis, size=size)
    probs = (inputs[0] - expanded).exp()
    spread = forward_op(g.tape, "broadcast", [g], axis=axis, size=size)
    return [spread * probs]


# --- registry ------------------------------------------------------------


def _reduce_sum(values, attrs):
    return np.sum(values[0], axis=attrs["axis"])


def _reduce_mean(values, attrs):
    return np.mean(values[0], axis=attrs["axis"])


def _broadcast(values, attrs):
    expanded = np.expand_dims(values[0], attrs["axis"])
    return np.repeat(expanded, attrs["size"], axis=attrs["axis"])


def _slice(values, attrs):
    return values[0][..., attrs["start"]:attrs["stop"]].copy()


OPS: dict[str, OpDef] = {
    "add": OpDef(2, lambda v, a: v[0] + v[1], _vjp_add, _same_shape),
    "sub": OpDef(2, lambda v, a: v[0] - v[1], _vjp_sub, _same_shape),
    "mul": OpDef(2, lambda v, a: v[0] * v[1], _vjp_mul, _same_shape),
    "div": OpDef(2, lambda v, a: v[0] / v[1], _vjp_div, _same_shape),
    "scale": OpDef(1, lambda v, a: v[0] * a["factor"], _vjp_scale, _any_shape),
    "shift": OpDef(1, lambda v, a: v[0] + a["offset"], _vjp_shift, _any_shape),
    "matmul": OpDef(2, lambda v, a: v[0] @ v[1], _vjp_matmul, _check_matmul),
    "transpose": OpDef(1, lambda v, a: v[0].T.copy(), _vjp_transpose, _check_transpose),
    "reshape": OpDef(1, lambda v, a: v[0].reshape(a["shape"]).copy(), _vjp_reshape, _check_reshape),
    "sum": OpDef(1, _reduce_sum, _vjp_sum, _check_reduce),
    "mean": OpDef(1, _reduce_mean, _vjp_mean, _check_reduce),
    "broadcast": OpDef(1, _broadcast, _vjp_broadcast, _check_broadcast),
    "fill": OpDef(1, lambda v, a: np.full(a["shape"], float(v[0])), _vjp_fill, _check_fill),
    "exp": OpDef(1, lambda v, a: np.exp(v[0]), _vjp_exp, _any_shape),
    "log": OpDef(1, lambda v, a: np.log(v[0]), _vjp_log, _any_shape),
    "maximum": OpDef(1, lambda v, a: np.maximum(v[0], a["value"]), _vjp_maximum, _any_shape),
    "sigmoid": OpDef(1, lambda v, a: expit(v[0]), _vjp_sigmoid, _any_shape),
    "softplus": OpDef(1, lambda v, a: stable_softplus(v[0]), _vjp_softplus, _any_shape),
    "concat": OpDef(None, lambda v, a: np.concatenate(v, axis=-1), _vjp_concat, _check_concat),
    "slice": OpDef(1, _slice, _vjp_slice, _check_slice),
    "logsumexp": OpDef(
        1, lambda v, a: logsumexp(v[0], axis=a["axis"]), _vjp_logsumexp, _check_logsumexp
    ),
}


def forward_op(tape: Tape, kind: str, inputs: Sequence[Var], **attrs) -> Var:
    """
    Evaluate one operation and append its record to ``tape``.

    Args:
        tape: Tape that owns every input
        kind: Operation kind, a key of ``OPS``
        inputs: Operand handles
        **attrs: Kind-specific attributes (axis, factor, offset, value, shape, ...)

    Returns:
        Var for the appended record

    Raises:
        TapeError: unknown kind, wrong arity or an input from another tape
        ShapeError: operand shapes do not conform to the kind
        NonFiniteError: the result contains Inf or NaN
    """
    op = OPS.get(kind)
    if op is None:
        raise TapeError(f"Unknown operation kind '{kind}'")
    if op.arity is not None and len(inputs) != op.arity:
        raise TapeError(f"'{kind}' takes {op.arity} inputs, got {len(inputs)}")
    for var in inputs:
        if not tape.owns(var):
            raise TapeError(f"Input {var!r} of '{kind}' does not live on this tape")

    values = [var.value for var in inputs]
    attrs = op.check(values, attrs)
    with np.errstate(all="ignore"):
        result = np.asarray(op.forward(values, attrs), dtype=np.float64)
    if not np.all(np.isfinite(result)):
        raise NonFiniteError(kind, f"input shapes {[v.shape for v in values]}")
    return tape.append(kind, tuple(var.handle for var in inputs), result, attrs)


# --- functional helpers ----------------------------------------------------


def matmul(a: Var, b: Var) -> Var:
    return forward_op(a.tape, "matmul", [a, b])


def broadcast_rows(vector: Var, rows: int) -> Var:
    """Repeat a vector over a new leading batch axis."""
    return forward_op(vector.tape, "broadcast", [vector], axis=0, size=rows)


def broadcast(var: Var, axis: int, size: int) -> Var:
    return forward_op(var.tape, "broadcast", [var], axis=axis, size=size)


def concat(parts: Sequence[Var]) -> Var:
    return forward_op(parts[0].tape, "concat", list(parts))


def logsumexp_op(var: Var, axis: int = -1) -> Var:
    return forward_op(var.tape, "logsumexp", [var], axis=axis)


def maximum(var: Var, value: float) -> Var:
    return forward_op(var.tape, "maximum", [var], value=float(value))


def sigmoid(var: Var) -> Var:
    return forward_op(var.tape, "sigmoid", [var])


def softplus_unit(var: Var) -> Var:
    """log(1 + e^x) at unit smoothness."""
    return forward_op(var.tape, "softplus", [var])


def log_softmax(logits: Var) -> Var:
    """Row-wise log-softmax of a (batch, C) Var via log-sum-exp."""
    classes = logits.shape[-1]
    lse = logsumexp_op(logits, axis=-1)
    return logits - broadcast(lse, axis=logits.ndim - 1, size=classes)


def softmax(logits: Var) -> Var:
    return log_softmax(logits).exp()
