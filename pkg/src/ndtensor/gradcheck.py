"""Central finite differences and error measures used as gradient oracles."""

from typing import Callable, Optional

import numpy as np

from src.ndtensor.errors import NonFiniteError


def finite_diff_grad(
    f: Callable[[np.ndarray], float],
    p: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """
    Central-difference gradient of a scalar function of a flat parameter vector.

    Args:
        f: Scalar function of a 1-d float64 array
        p: Evaluation point
        h: Step size, must be positive

    Returns:
        Array of (f(p + h e_i) - f(p - h e_i)) / 2h, same shape as ``p``
    """
    if h <= 0:
        raise ValueError(f"Step size must be positive, got {h}")
    point = np.array(p, dtype=np.float64).reshape(-1)
    grad = np.zeros_like(point)
    for i in range(point.size):
        original = point[i]
        point[i] = original + h
        upper = float(f(point.copy()))
        point[i] = original - h
        lower = float(f(point.copy()))
        point[i] = original
        if not (np.isfinite(upper) and np.isfinite(lower)):
            raise NonFiniteError("finite_diff_grad", f"coordinate {i}")
        grad[i] = (upper - lower) / (2.0 * h)
    return grad.reshape(np.shape(p))


def max_relative_error(
    actual: np.ndarray,
    expected: np.ndarray,
    floor: Optional[float] = None,
) -> float:
    """
    Largest coordinate-wise relative error between two gradients.

    The denominator is max(|actual_i|, |expected_i|, floor). When ``floor`` is
    omitted it is 1e-3 of the larger gradient's infinity norm, so coordinates
    that are zero up to roundoff do not dominate the measure.
    """
    a = np.asarray(actual, dtype=np.float64).reshape(-1)
    b = np.asarray(expected, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"Gradient shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    if floor is None:
        floor = 1e-3 * max(np.max(np.abs(a)), np.max(np.abs(b)))
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), max(floor, 1e-300))
    return float(np.max(np.abs(a - b) / denom))


def cosine_similarity(actual: np.ndarray, expected: np.ndarray) -> float:
    a = np.asarray(actual, dtype=np.float64).reshape(-1)
    b = np.asarray(expected, dtype=np.float64).reshape(-1)
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0.0:
        return 1.0 if np.array_equal(a, b) else 0.0
    return float(a @ b / norm)
