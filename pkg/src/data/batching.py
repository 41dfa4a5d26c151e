"""Per-epoch seeded mini-batch iteration."""

from typing import Iterator

import numpy as np

from src.data.dataset import Dataset

Batch = tuple[np.ndarray, np.ndarray]


def epoch_order(n: int, seed: int, epoch: int) -> np.ndarray:
    """
    Permutation of range(n) determined by (seed, epoch).

    The generator is seeded with the entropy pair [seed, epoch] rather than
    seed XOR epoch, so distinct (seed, epoch) pairs never share a stream.
    """
    return np.random.default_rng([seed, epoch]).permutation(n)


def batch_iter(ds: Dataset, batch_size: int, seed: int, epoch: int) -> Iterator[Batch]:
    """
    Yield every instance once for the given epoch, in seeded order.

    The final batch may be short.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    order = epoch_order(ds.n, seed, epoch)
    for start in range(0, ds.n, batch_size):
        rows = order[start:start + batch_size]
        yield ds.x[rows], ds.y[rows]


class BatchStream:
    """
    Endless batch source that walks epochs 0, 1, 2, ... and reshuffles at each boundary.

    Two streams built with the same dataset, batch size and seed yield
    identical batch sequences.
    """

    def __init__(self, ds: Dataset, batch_size: int, seed: int):
        if ds.n == 0:
            raise ValueError(f"Cannot stream batches from empty dataset '{ds.name}'")
        self.ds = ds
        self.batch_size = batch_size
        self.seed = seed
        self.epoch = 0
        self._batches = batch_iter(ds, batch_size, seed, self.epoch)

    def __iter__(self) -> "BatchStream":
        return self

    def __next__(self) -> Batch:
        try:
            return next(self._batches)
        except StopIteration:
            self.epoch += 1
            self._batches = batch_iter(self.ds, self.batch_size, self.seed, self.epoch)
            return next(self._batches)

    def take(self, count: int) -> list[Batch]:
        return [next(self) for _ in range(count)]
