"""Meta-optimization settings shared by the offline and online phases."""

from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import (
    ETA_OFFLINE,
    ETA_ONLINE,
    MetaBatchSource,
    S_INIT,
    S_INNER,
    S_TRAIN,
)
from src.optim import AdamConfig, SgdConfig


class MetaConfig(BaseModel):
    """
    Step counts, learning rates and batch sourcing for loss learning.

    ``adam`` supplies the moment constants; its ``eta`` is replaced by
    ``eta_offline`` or ``eta_online`` depending on the phase.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    s_init: int = Field(default=S_INIT, ge=0, description="Offline meta-iterations")
    s_inner: int = Field(default=S_INNER, ge=1, description="Differentiable inner steps")
    s_train: int = Field(default=S_TRAIN, ge=0, description="Base-learner training steps")
    eta_offline: float = Field(default=ETA_OFFLINE, ge=0.0)
    eta_online: float = Field(default=ETA_ONLINE, ge=0.0)
    inner: SgdConfig = SgdConfig()
    adam: AdamConfig = AdamConfig()
    meta_batch_source: MetaBatchSource = MetaBatchSource.VALID_SPLIT

    def offline_optimizer(self) -> AdamConfig:
        return self.adam.model_copy(update={"eta": self.eta_offline})

    def online_optimizer(self) -> AdamConfig:
        return self.adam.model_copy(update={"eta": self.eta_online})
