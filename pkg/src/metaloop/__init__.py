"""Offline and online loss learning around a differentiable inner step."""

from src.metaloop.config import MetaConfig
from src.metaloop.errors import DivergenceError
from src.metaloop.inner import InnerStep, LearnedLoss, differentiable_step, inner_step
from src.metaloop.meta_gradient import MetaStep, meta_gradient, meta_step
from src.metaloop.oracle import (
    fd_meta_gradient,
    flatten_parameters,
    gradient_agreement,
    meta_objective,
    unflatten_parameters,
)
from src.metaloop.results import Evaluation, SurfaceSnapshot, TrainResult, TrajectoryPoint
from src.metaloop.evaluation import SplitEvaluator
from src.metaloop.offline import offline_init
from src.metaloop.online import online_train, schedule

__all__ = [
    "MetaConfig",
    "DivergenceError",
    "InnerStep",
    "LearnedLoss",
    "differentiable_step",
    "inner_step",
    "MetaStep",
    "meta_gradient",
    "meta_step",
    "fd_meta_gradient",
    "flatten_parameters",
    "gradient_agreement",
    "meta_objective",
    "unflatten_parameters",
    "Evaluation",
    "SurfaceSnapshot",
    "TrainResult",
    "TrajectoryPoint",
    "SplitEvaluator",
    "offline_init",
    "online_train",
    "schedule",
]
