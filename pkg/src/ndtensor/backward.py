"""Reverse-mode accumulation over a tape, optionally recorded for double backprop."""

from typing import Sequence

import numpy as np

from src.ndtensor.errors import TapeError
from src.ndtensor.ops import OPS
from src.ndtensor.tape import Tape, Var


def backward(
    tape: Tape,
    output: Var,
    wrt: Sequence[Var],
    record: bool = False,
) -> list[Var]:
    """
    Gradients of a scalar ``output`` with respect to each Var in ``wrt``.

    With ``record=True`` every arithmetic step of the backward pass is appended
    to ``tape`` and the returned gradients are ordinary Vars that can be
    differentiated again. With ``record=False`` the pass runs on a scratch tape
    and the results come back as constants on ``tape``.

    Args:
        tape: Tape holding the forward computation
        output: Scalar Var (shape ``()``)
        wrt: Vars to differentiate against
        record: Record the backward pass on ``tape``

    Returns:
        One gradient Var per entry of ``wrt``, same shape as that entry

    Raises:
        TapeError: output is not scalar or a Var is not on ``tape``
    """
    if not tape.owns(output):
        raise TapeError(f"Output {output!r} does not live on this tape")
    if output.shape != ():
        raise TapeError(f"backward needs a scalar output, got shape {output.shape}")
    for var in wrt:
        if not tape.owns(var):
            raise TapeError(f"Gradient target {var!r} does not live on this tape")

    nodes = tape.nodes[: output.handle + 1]
    targets = {var.handle for var in wrt}

    # Which records lie on a path from some target
    depends = [False] * len(nodes)
    for handle, node in enumerate(nodes):
        depends[handle] = handle in targets or any(depends[i] for i in node.inputs)

    work = tape if record else Tape()
    lifted: dict[int, Var] = {}

    def lift(handle: int) -> Var:
        if record:
            return Var(tape, handle)
        if handle not in lifted:
            lifted[handle] = work.constant(nodes[handle].value)
        return lifted[handle]

    found: dict[int, Var] = {}
    pending: dict[int, Var] = {}
    if depends[output.handle]:
        pending[output.handle] = work.constant(np.ones(()))

    for handle in range(output.handle, -1, -1):
        grad = pending.pop(handle, None)
        if grad is None:
            continue
        if handle in targets:
            found[handle] = grad
        node = nodes[handle]
        if not node.inputs or not any(depends[i] for i in node.inputs):
            continue
        inputs = [lift(i) for i in node.inputs]
        input_grads = OPS[node.kind].vjp(grad, inputs, lift(handle), node.attrs)
        for index, input_grad in zip(node.inputs, input_grads):
            if input_grad is None or not depends[index]:
                continue
            if index in pending:
                pending[index] = pending[index] + input_grad
            else:
                pending[index] = input_grad

    results = []
    for var in wrt:
        grad = found.get(var.handle)
        if grad is None:
            results.append(tape.constant(np.zeros(var.shape)))
        elif record:
            results.append(grad)
        else:
            results.append(tape.constant(grad.value))
    return results


def gradients(tape: Tape, output: Var, wrt: Sequence[Var]) -> list[np.ndarray]:
    """Plain (unrecorded) gradient values as arrays."""
    return [np.array(g.value) for g in backward(tape, output, wrt, record=False)]
