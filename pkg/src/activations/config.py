"""Activation configuration schema."""

from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import ActivationKind, SMOOTH_LEAKY_BETA, SMOOTH_LEAKY_GAMMA


class ActivationConfig(BaseModel):
    """Activation kind plus its fixed leak and smoothness parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ActivationKind = ActivationKind.SMOOTH_LEAKY_RELU
    gamma: float = Field(default=SMOOTH_LEAKY_GAMMA, ge=0.0, lt=1.0, description="Leak")
    beta: float = Field(default=SMOOTH_LEAKY_BETA, gt=0.0, description="Smoothness")
