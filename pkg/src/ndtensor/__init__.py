"""Dense float64 tensors with a re-entrant reverse-mode tape."""

from src.ndtensor.errors import NonFiniteError, ShapeError, TapeError
from src.ndtensor.tape import Node, Tape, Tensor, Var, as_tensor
from src.ndtensor.ops import (
    OPS,
    broadcast,
    broadcast_rows,
    concat,
    forward_op,
    log_softmax,
    logsumexp_op,
    matmul,
    maximum,
    sigmoid,
    softmax,
    softplus_unit,
    stable_softplus,
)
from src.ndtensor.backward import backward, gradients
from src.ndtensor.gradcheck import cosine_similarity, finite_diff_grad, max_relative_error

__all__ = [
    "NonFiniteError",
    "ShapeError",
    "TapeError",
    "Node",
    "Tape",
    "Tensor",
    "Var",
    "as_tensor",
    "OPS",
    "broadcast",
    "broadcast_rows",
    "concat",
    "forward_op",
    "log_softmax",
    "logsumexp_op",
    "matmul",
    "maximum",
    "sigmoid",
    "softmax",
    "softplus_unit",
    "stable_softplus",
    "backward",
    "gradients",
    "cosine_similarity",
    "finite_diff_grad",
    "max_relative_error",
]
