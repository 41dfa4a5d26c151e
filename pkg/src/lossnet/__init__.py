"""Learned loss network and loss-surface export."""

from src.lossnet.network import (
    LossNetwork,
    evaluate_pairs,
    init_loss_network,
    load_loss_network,
    loss_forward,
    rig_constant,
    save_loss_network,
)
from src.lossnet.surface import export_loss_surface, standard_surface, surface_grid

__all__ = [
    "LossNetwork",
    "evaluate_pairs",
    "init_loss_network",
    "load_loss_network",
    "loss_forward",
    "rig_constant",
    "save_loss_network",
    "export_loss_surface",
    "standard_surface",
    "surface_grid",
]
