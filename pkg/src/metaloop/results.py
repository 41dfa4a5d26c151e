"""Plain records produced by a training run."""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from src.config.constants import Split, TrainMode
from src.lossnet import LossNetwork
from src.models import BaseLearner


@dataclass(frozen=True)
class Evaluation:
    """Task loss and error rate of the current model on one split."""

    step: int
    split: str
    task_loss: float
    error_rate: Optional[float]
    wall_clock_s: float


@dataclass(frozen=True)
class SurfaceSnapshot:
    """Loss-surface rows (y_fixed, f, loss) at a training step."""

    step: int
    rows: list[tuple[float, float, float]]


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    theta_norm: float
    update_norm: float
    phi_norm: float
    learned_loss: float


@dataclass
class TrainResult:
    """Final state and logs of one training run."""

    mode: TrainMode
    model: BaseLearner
    net: Optional[LossNetwork]
    evaluations: list[Evaluation] = field(default_factory=list)
    snapshots: list[SurfaceSnapshot] = field(default_factory=list)
    trajectory: list[TrajectoryPoint] = field(default_factory=list)
    theta_history: list[tuple[int, tuple[np.ndarray, ...]]] = field(default_factory=list)
    theta_updates: int = 0
    phi_updates: int = 0

    def final_evaluation(self, split: Union[Split, str]) -> Optional[Evaluation]:
        name = Split(split).value
        matches = [e for e in self.evaluations if e.split == name]
        return matches[-1] if matches else None
