"""One-dimensional slices of the learned loss for plotting."""

from typing import Sequence

import numpy as np

from src.config.constants import SURFACE_GRID_POINTS, SURFACE_GRID_RANGE, SURFACE_Y_FIXED
from src.lossnet.network import LossNetwork, evaluate_pairs


def surface_grid(points: int = SURFACE_GRID_POINTS) -> np.ndarray:
    low, high = SURFACE_GRID_RANGE
    return np.linspace(low, high, points)


def export_loss_surface(
    net: LossNetwork,
    y_fixed: float,
    grid: Sequence[float],
) -> list[tuple[float, float]]:
    """
    Evaluate l_phi(y_fixed, f) for every f in ``grid``.

    Returns:
        List of (f, loss) in grid order
    """
    f_values = np.asarray(grid, dtype=np.float64).reshape(-1)
    if f_values.size == 0:
        raise ValueError("Surface grid must be non-empty")
    losses = evaluate_pairs(net, np.full_like(f_values, float(y_fixed)), f_values)
    return [(float(f), float(loss)) for f, loss in zip(f_values, losses)]


def standard_surface(net: LossNetwork) -> list[tuple[float, float, float]]:
    """The fixed 101-point grid on [0, 1] at y_fixed = 0 and 1, as (y_fixed, f, loss) rows."""
    grid = surface_grid()
    rows = []
    for y_fixed in SURFACE_Y_FIXED:
        rows.extend((y_fixed, f, loss) for f, loss in export_loss_surface(net, y_fixed, grid))
    return rows
