"""Append-only computation tape and the Var handles that point into it."""

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

import numpy as np

from src.ndtensor.errors import NonFiniteError

Tensor = np.ndarray
Scalar = Union[int, float]


def as_tensor(value: Any) -> Tensor:
    """
    Copy ``value`` into a read-only float64 array.

    Raises:
        NonFiniteError: if any element is Inf or NaN
    """
    array = np.array(value, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise NonFiniteError("tensor", "input contains Inf or NaN")
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Node:
    """One operation record: kind, input handles, computed value and op attributes."""

    kind: str
    inputs: tuple[int, ...]
    value: Tensor
    attrs: dict = field(default_factory=dict)


class Tape:
    """
    Append-only record of tensor operations.

    Records are never mutated after creation. A recorded backward pass appends
    its own records to the same tape, which is what makes second derivatives
    available.
    """

    def __init__(self) -> None:
        self._nodes: list[Node] = []

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def nodes(self) -> Sequence[Node]:
        return tuple(self._nodes)

    def node(self, handle: int) -> Node:
        return self._nodes[handle]

    def owns(self, var: "Var") -> bool:
        return var.tape is self and 0 <= var.handle < len(self._nodes)

    def append(self, kind: str, inputs: tuple[int, ...], value: Tensor, attrs: dict) -> "Var":
        value.flags.writeable = False
        self._nodes.append(Node(kind=kind, inputs=inputs, value=value, attrs=attrs))
        return Var(self, len(self._nodes) - 1)

    def leaf(self, value: Any) -> "Var":
        """Record a differentiable input."""
        return self.append("leaf", (), as_tensor(value), {})

    def constant(self, value: Any) -> "Var":
        """Record a value that is not expected to be differentiated against."""
        return self.append("const", (), as_tensor(value), {})

    def leaves(self, values: Sequence[Any]) -> list["Var"]:
        return [self.leaf(v) for v in values]


def _op(kind: str, inputs: list["Var"], **attrs) -> "Var":
    from src.ndtensor.ops import forward_op

    return forward_op(inputs[0].tape, kind, inputs, **attrs)


@dataclass(frozen=True, eq=False)
class Var:
    """Handle to a node on a tape."""

    tape: Tape
    handle: int

    @property
    def value(self) -> Tensor:
        return self.tape.node(self.handle).value

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def ndim(self) -> int:
        return self.value.ndim

    def item(self) -> float:
        return float(self.value)

    def _lift(self, other: Union["Var", Scalar]) -> "Var":
        if isinstance(other, Var):
            return other
        return self.tape.constant(np.full(self.shape, float(other)))

    def __add__(self, other: Union["Var", Scalar]) -> "Var":
        if isinstance(other, Var):
            return _op("add", [self, other])
        return _op("shift", [self], offset=float(other))

    def __radd__(self, other: Scalar) -> "Var":
        return self.__add__(other)

    def __sub__(self, other: Union["Var", Scalar]) -> "Var":
        if isinstance(other, Var):
            return _op("sub", [self, other])
        return _op("shift", [self], offset=-float(other))

    def __rsub__(self, other: Scalar) -> "Var":
        return _op("shift", [_op("scale", [self], factor=-1.0)], offset=float(other))

    def __mul__(self, other: Union["Var", Scalar]) -> "Var":
        if isinstance(other, Var):
            return _op("mul", [self, other])
        return _op("scale", [self], factor=float(other))

    def __rmul__(self, other: Scalar) -> "Var":
        return self.__mul__(other)

    def __truediv__(self, other: Union["Var", Scalar]) -> "Var":
        if isinstance(other, Var):
            return _op("div", [self, other])
        return _op("scale", [self], factor=1.0 / float(other))

    def __rtruediv__(self, other: Scalar) -> "Var":
        return _op("div", [self._lift(other), self])

    def __neg__(self) -> "Var":
        return _op("scale", [self], factor=-1.0)

    def __matmul__(self, other: "Var") -> "Var":
        return _op("matmul", [self, other])

    @property
    def T(self) -> "Var":
        return _op("transpose", [self])

    def sum(self, axis: Optional[int] = None) -> "Var":
        return _op("sum", [self], axis=axis)

    def mean(self, axis: Optional[int] = None) -> "Var":
        return _op("mean", [self], axis=axis)

    def exp(self) -> "Var":
        return _op("exp", [self])

    def log(self) -> "Var":
        return _op("log", [self])

    def reshape(self, *shape: int) -> "Var":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return _op("reshape", [self], shape=tuple(shape))

    def __repr__(self) -> str:
        return f"Var(handle={self.handle}, shape={self.shape})"
