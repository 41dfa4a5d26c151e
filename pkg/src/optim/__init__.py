"""Parameter update rules."""

from src.optim.sgd import SgdConfig, SgdState, sgd_step
from src.optim.adam import AdamConfig, AdamState, adam_step, init_adam_state

__all__ = [
    "SgdConfig",
    "SgdState",
    "sgd_step",
    "AdamConfig",
    "AdamState",
    "adam_step",
    "init_adam_state",
]
