"""Base learners and task losses."""

from src.models.base_learner import (
    BaseLearner,
    ModelSpec,
    init_base_learner,
    model_forward,
    predict,
    theta_digest,
)
from src.models.task_loss import error_rate, output_transform, task_loss, task_loss_value

__all__ = [
    "BaseLearner",
    "ModelSpec",
    "init_base_learner",
    "model_forward",
    "predict",
    "theta_digest",
    "error_rate",
    "output_transform",
    "task_loss",
    "task_loss_value",
]
