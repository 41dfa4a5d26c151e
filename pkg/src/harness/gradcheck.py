"""Oracle suites comparing analytic derivatives with finite differences."""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.activations import ActivationConfig, activate, activation_derivative
from src.config.constants import ActivationKind, TaskLossKind
from src.data import BatchStream, synth_classification
from src.lossnet import init_loss_network
from src.metaloop import fd_meta_gradient, gradient_agreement, meta_gradient
from src.models import ModelSpec, init_base_learner
from src.optim import SgdConfig

logger = logging.getLogger(__name__)

TINY_FEATURES = 2
TINY_CLASSES = 2
TINY_LOSS_WIDTH = 8
TINY_BATCH = 16
TINY_ALPHA = 0.1
MIN_COSINE = 0.9999
ACTIVATION_GRID = np.round(np.arange(-1000, 1001) * 0.01, 2)


@dataclass(frozen=True)
class GradcheckRow:
    suite: str
    case: str
    cosine: float
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        cosine_ok = np.isnan(self.cosine) or self.cosine >= MIN_COSINE
        return self.max_error <= self.tolerance and cosine_ok


def tiny_meta_case(seed: int, s_inner: int, width: int = TINY_LOSS_WIDTH):
    """A logistic base learner and a small loss network on separable blobs."""
    data = synth_classification(96, TINY_FEATURES, TINY_CLASSES, separation=3.0, seed=seed)
    spec = ModelSpec(in_dim=TINY_FEATURES, n_classes=TINY_CLASSES)
    model = init_base_learner(spec, seed)
    net = init_loss_network(seed + 1, width=width)
    stream = BatchStream(data, TINY_BATCH, seed)
    return net, model, stream.take(s_inner), next(stream)


def check_meta_gradient(
    seeds: Iterable[int],
    s_inner: int,
    width: int = TINY_LOSS_WIDTH,
    tolerance: float = 1e-3,
) -> list[GradcheckRow]:
    rows = []
    cfg = SgdConfig(alpha=TINY_ALPHA)
    for seed in seeds:
        net, model, train_batches, meta_batch = tiny_meta_case(seed, s_inner, width)
        args = (net, model, train_batches, meta_batch, cfg, s_inner, TaskLossKind.CROSS_ENTROPY)
        cosine, error = gradient_agreement(meta_gradient(*args), fd_meta_gradient(*args))
        case = f"seed={seed} s_inner={s_inner}"
        rows.append(GradcheckRow("meta_gradient", case, cosine, error, tolerance))
        logger.debug(f"meta_gradient {case}: cos={cosine:.6f} err={error:.2e}")
    return rows


def check_activation_derivative(
    betas: Sequence[float] = (1.0, 10.0),
    gammas: Sequence[float] = (0.01, 0.1),
    h: float = 1e-5,
    tolerance: float = 1e-8,
) -> list[GradcheckRow]:
    """Closed-form smooth leaky ReLU derivative against central differences on [-10, 10]."""
    rows = []
    x = ACTIVATION_GRID
    for beta in betas:
        for gamma in gammas:
            cfg = ActivationConfig(kind=ActivationKind.SMOOTH_LEAKY_RELU, beta=beta, gamma=gamma)
            numeric = (activate(x + h, cfg) - activate(x - h, cfg)) / (2.0 * h)
            error = float(np.max(np.abs(activation_derivative(x, cfg) - numeric)))
            case = f"beta={beta:g} gamma={gamma:g}"
            rows.append(GradcheckRow("activation", case, float("nan"), error, tolerance))
    return rows


def run_gradcheck(
    seeds: Iterable[int] = range(10),
    s_inner_values: Sequence[int] = (1, 5),
    width: int = TINY_LOSS_WIDTH,
    tolerance: float = 1e-3,
) -> list[GradcheckRow]:
    """Every oracle suite: meta-gradient per (seed, s_inner), then the activation derivative."""
    seeds = list(seeds)
    rows: list[GradcheckRow] = []
    for s_inner in s_inner_values:
        rows.extend(check_meta_gradient(seeds, s_inner, width, tolerance))
    rows.extend(check_activation_derivative())
    failed = [r for r in rows if not r.passed]
    logger.info(f"Gradcheck: {len(rows) - len(failed)}/{len(rows)} cases within tolerance")
    return rows
