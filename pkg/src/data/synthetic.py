"""Seeded synthetic classification and regression tasks."""

import numpy as np

from src.data.dataset import Dataset, one_hot


def synth_classification(
    n: int,
    d: int,
    n_classes: int,
    separation: float,
    seed: int,
) -> Dataset:
    """
    Unit-variance Gaussian blobs, one per class.

    When n_classes <= d the class means sit on scaled coordinate axes so every
    pair of means is exactly ``separation`` apart; otherwise means are random
    directions of radius separation / 2. Classes are balanced (i mod C) and
    rows are shuffled.
    """
    if n < n_classes:
        raise ValueError(f"Need n >= n_classes, got n={n}, n_classes={n_classes}")
    rng = np.random.default_rng(seed)
    if n_classes <= d:
        centers = np.eye(n_classes, d) * (separation / np.sqrt(2.0))
    else:
        directions = rng.normal(size=(n_classes, d))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        centers = directions * (separation / 2.0)
    labels = rng.permutation(np.arange(n) % n_classes)
    x = centers[labels] + rng.normal(size=(n, d))
    return Dataset(x=x, y=one_hot(labels, n_classes), name="synthetic_classification")


def synth_regression(n: int, d: int, noise: float, seed: int) -> Dataset:
    """Targets y = x w + b + noise * eps with standard normal x, w, b and eps."""
    if n < 1:
        raise ValueError(f"Need at least one instance, got {n}")
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, d))
    w = rng.normal(size=(d, 1))
    b = rng.normal()
    y = x @ w + b + noise * rng.normal(size=(n, 1))
    return Dataset(x=x, y=y, name="synthetic_regression")
