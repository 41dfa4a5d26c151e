"""In-memory datasets and deterministic train/validation splits."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import VALID_FRACTION, Split
from src.ndtensor import ShapeError


@dataclass(frozen=True)
class Dataset:
    """Inputs ``x`` (n, d) and targets ``y`` (n, C); immutable after construction."""

    x: np.ndarray
    y: np.ndarray
    name: str = "dataset"

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if x.ndim != 2 or y.ndim != 2:
            raise ShapeError(f"Dataset '{self.name}' needs 2-d x and y, got {x.shape}, {y.shape}")
        if x.shape[0] != y.shape[0]:
            raise ShapeError(f"Dataset '{self.name}': {x.shape[0]} inputs but {y.shape[0]} targets")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.x.shape[1])

    @property
    def n_outputs(self) -> int:
        return int(self.y.shape[1])

    def subset(self, indices: np.ndarray, name: str = "") -> "Dataset":
        return Dataset(x=self.x[indices], y=self.y[indices], name=name or self.name)

    def __len__(self) -> int:
        return self.n


class SplitSpec(BaseModel):
    """Fraction of instances held out for validation and the permutation seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    valid_fraction: float = Field(default=VALID_FRACTION, ge=0.0, lt=1.0)
    seed: int = 0


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """
    Seeded permutation split into disjoint, exhaustive train and validation sets.

    The first floor((1 - f) * n) permuted rows form the training set; the
    remainder is validation. A 1e-9 slack keeps exact products such as
    0.9 * 60000 from flooring one row short.
    """
    order = np.random.default_rng(spec.seed).permutation(ds.n)
    n_train = int(np.floor((1.0 - spec.valid_fraction) * ds.n + 1e-9))
    train = ds.subset(order[:n_train], name=f"{ds.name}/train")
    valid = ds.subset(order[n_train:], name=f"{ds.name}/valid")
    return train, valid


def one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    encoded = np.zeros((labels.shape[0], n_classes))
    encoded[np.arange(labels.shape[0]), labels] = 1.0
    return encoded


@dataclass(frozen=True)
class DataSplits:
    """Train, validation and optional test sets for one task."""

    train: Dataset
    valid: Dataset
    test: Optional[Dataset] = None

    def named(self) -> list[tuple[str, Dataset]]:
        pairs = [(Split.TRAIN, self.train), (Split.VALID, self.valid)]
        if self.test is not None:
            pairs.append((Split.TEST, self.test))
        return [(which.value, ds) for which, ds in pairs if ds.n > 0]
