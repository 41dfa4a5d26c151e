"""Meta-learned loss network applied output-wise and mean-reduced."""

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from src.activations import ActivationConfig, activate, apply_activation
from src.config.constants import (
    ActivationKind,
    LOSS_NET_INPUT_DIM,
    LOSS_NET_WIDTH,
    LossNetMode,
)
from src.ndtensor import ShapeError, Tape, Var, broadcast_rows, concat

logger = logging.getLogger(__name__)

ArrayOrVar = Union[np.ndarray, Var]


@dataclass(frozen=True)
class LossNetwork:
    """
    Feed-forward loss network l_phi: R^2 -> R with two hidden layers.

    ``phi`` holds (W1, b1, W2, b2, W3, b3) for the layers 2->H, H->H, H->1.
    Parameters are replaced wholesale on update, never mutated.
    """

    phi: tuple[np.ndarray, ...]
    hidden_activation: ActivationConfig
    output_activation: ActivationConfig
    hidden_width: int
    mode: LossNetMode = LossNetMode.ADALFL

    def parameters(self) -> tuple[np.ndarray, ...]:
        return self.phi

    def with_parameters(self, phi: Sequence[np.ndarray]) -> "LossNetwork":
        new_phi = tuple(np.array(p, dtype=np.float64) for p in phi)
        for old, new in zip(self.phi, new_phi):
            if old.shape != new.shape:
                raise ShapeError(f"Parameter shape changed: {old.shape} -> {new.shape}")
        return replace(self, phi=new_phi)

    def forward(
        self,
        y: ArrayOrVar,
        y_pred: ArrayOrVar,
        tape: Tape,
        phi: Optional[Sequence[Var]] = None,
    ) -> Var:
        return loss_forward(self, y, y_pred, tape, phi)

    @property
    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.phi))


def _activation_pair(mode: LossNetMode) -> tuple[ActivationConfig, ActivationConfig]:
    if mode is LossNetMode.ML3_ABLATION:
        return (
            ActivationConfig(kind=ActivationKind.RELU),
            ActivationConfig(kind=ActivationKind.SOFTPLUS, beta=1.0),
        )
    return (
        ActivationConfig(kind=ActivationKind.SMOOTH_LEAKY_RELU),
        ActivationConfig(kind=ActivationKind.IDENTITY),
    )


def init_loss_network(
    seed: int,
    width: int = LOSS_NET_WIDTH,
    mode: LossNetMode = LossNetMode.ADALFL,
    hidden_activation: Optional[ActivationConfig] = None,
) -> LossNetwork:
    """
    Initialize a loss network deterministically from ``seed``.

    Weights are uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; biases are zero.

    Args:
        seed: Generator seed
        width: Hidden units per layer
        mode: ``adalfl`` (smooth leaky ReLU, identity output) or
            ``ml3_ablation`` (ReLU, softplus output)
        hidden_activation: Override for the hidden activation in ``adalfl`` mode
    """
    if width < 1:
        raise ValueError(f"Loss network width must be >= 1, got {width}")
    rng = np.random.default_rng(seed)
    dims = [LOSS_NET_INPUT_DIM, width, width, 1]
    phi: list[np.ndarray] = []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        phi.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        phi.append(np.zeros(fan_out))

    hidden, output = _activation_pair(mode)
    if hidden_activation is not None and mode is LossNetMode.ADALFL:
        hidden = hidden_activation
    return LossNetwork(
        phi=tuple(phi),
        hidden_activation=hidden,
        output_activation=output,
        hidden_width=width,
        mode=mode,
    )


def rig_constant(net: LossNetwork, value: float) -> LossNetwork:
    """A copy of ``net`` whose output is the constant ``value`` (zero weights, identity output)."""
    phi = [np.zeros_like(p) for p in net.phi]
    phi[-1] = np.full_like(net.phi[-1], value)
    return replace(
        net,
        phi=tuple(phi),
        output_activation=ActivationConfig(kind=ActivationKind.IDENTITY),
    )


def _as_var(tape: Tape, value: ArrayOrVar) -> Var:
    return value if isinstance(value, Var) else tape.constant(value)


def loss_forward(
    net: LossNetwork,
    y: ArrayOrVar,
    y_pred: ArrayOrVar,
    tape: Tape,
    phi: Optional[Sequence[Var]] = None,
) -> Var:
    """
    Mean learned loss over every (instance, channel) pair.

    Each pair (y_i, y_pred_i) is fed through l_phi; the outputs are averaged
    over channels and over the batch.

    Args:
        net: Loss network architecture and (default) parameters
        y: Targets, shape (batch, C)
        y_pred: Predictions, shape (batch, C)
        tape: Tape to record on
        phi: Parameter Vars to use instead of ``net.phi`` (for meta-gradients)

    Returns:
        Scalar Var
    """
    y_var = _as_var(tape, y)
    pred_var = _as_var(tape, y_pred)
    if y_var.shape != pred_var.shape or y_var.ndim != 2:
        raise ShapeError(
            f"Targets {y_var.shape} and predictions {pred_var.shape} must match (batch, C)"
        )
    if min(y_var.shape) < 1:
        raise ShapeError(f"Empty batch or channel axis: {y_var.shape}")

    params = list(phi) if phi is not None else [tape.constant(p) for p in net.phi]
    pairs = y_var.shape[0] * y_var.shape[1]
    h = concat([y_var.reshape(pairs, 1), pred_var.reshape(pairs, 1)])

    layers = [(params[i], params[i + 1]) for i in range(0, len(params), 2)]
    for index, (weight, bias) in enumerate(layers):
        h = h @ weight + broadcast_rows(bias, pairs)
        last = index == len(layers) - 1
        h = apply_activation(h, net.output_activation if last else net.hidden_activation)
    return h.mean()


def evaluate_pairs(net: LossNetwork, y: np.ndarray, f: np.ndarray) -> np.ndarray:
    """l_phi on broadcast arrays of target and prediction values, without a tape."""
    y_arr, f_arr = np.broadcast_arrays(np.asarray(y, np.float64), np.asarray(f, np.float64))
    h = np.stack([y_arr.reshape(-1), f_arr.reshape(-1)], axis=1)
    layers = [(net.phi[i], net.phi[i + 1]) for i in range(0, len(net.phi), 2)]
    for index, (weight, bias) in enumerate(layers):
        h = h @ weight + bias
        last = index == len(layers) - 1
        h = activate(h, net.output_activation if last else net.hidden_activation)
    return h.reshape(y_arr.shape)


def save_loss_network(net: LossNetwork, path: Union[str, Path]) -> Path:
    """Write parameters and a JSON architecture header to an ``.npz`` file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "hidden_width": net.hidden_width,
        "mode": net.mode.value,
        "hidden_activation": net.hidden_activation.model_dump(mode="json"),
        "output_activation": net.output_activation.model_dump(mode="json"),
        "n_params": len(net.phi),
    }
    arrays = {f"phi_{i}": p for i, p in enumerate(net.phi)}
    with path.open("wb") as fh:
        np.savez(fh, header=np.array(json.dumps(header)), **arrays)
    logger.info(f"Saved loss network ({net.parameter_count} params) to {path}")
    return path


def load_loss_network(path: Union[str, Path]) -> LossNetwork:
    """Read a loss network written by ``save_loss_network``."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Loss network file not found: {path}")
    with np.load(path, allow_pickle=False) as data:
        header = json.loads(str(data["header"]))
        phi = tuple(np.array(data[f"phi_{i}"]) for i in range(header["n_params"]))
    return LossNetwork(
        phi=phi,
        hidden_activation=ActivationConfig.model_validate(header["hidden_activation"]),
        output_activation=ActivationConfig.model_validate(header["output_activation"]),
        hidden_width=int(header["hidden_width"]),
        mode=LossNetMode(header["mode"]),
    )
