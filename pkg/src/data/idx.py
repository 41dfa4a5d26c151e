"""IDX binary format reader/writer (MNIST images and labels)."""

import gzip
import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.config.constants import (
    IDX_IMAGES_MAGIC,
    IDX_LABELS_MAGIC,
    MNIST_CLASSES,
    MNIST_MEAN,
    MNIST_STD,
)
from src.data.dataset import Dataset, one_hot

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class IdxFormatError(ValueError):
    """File does not follow the IDX encoding expected for MNIST."""


def _read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"IDX file not found: {path}")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        return fh.read()


def _parse(raw: bytes, magic: int, n_dims: int, path: PathLike) -> np.ndarray:
    header_size = 4 + 4 * n_dims
    if len(raw) < header_size:
        raise IdxFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    header = np.frombuffer(raw[:header_size], dtype=">u4")
    if int(header[0]) != magic:
        raise IdxFormatError(f"{path}: magic 0x{int(header[0]):08x}, expected 0x{magic:08x}")
    dims = tuple(int(d) for d in header[1:])
    expected = int(np.prod(dims))
    payload = raw[header_size:]
    if len(payload) != expected:
        raise IdxFormatError(
            f"{path}: payload has {len(payload)} bytes, header promises {expected}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(dims)


def read_idx_images(path: PathLike) -> np.ndarray:
    """Raw uint8 images, shape (n, rows, cols)."""
    return _parse(_read_bytes(path), IDX_IMAGES_MAGIC, 3, path)


def read_idx_labels(path: PathLike) -> np.ndarray:
    """Raw uint8 labels, shape (n,)."""
    return _parse(_read_bytes(path), IDX_LABELS_MAGIC, 1, path)


def normalize_pixels(images: np.ndarray) -> np.ndarray:
    """Scale bytes to [0, 1], then standardize with the MNIST mean and std."""
    return (images.astype(np.float64) / 255.0 - MNIST_MEAN) / MNIST_STD


def load_idx(images_path: PathLike, labels_path: PathLike, name: str = "mnist") -> Dataset:
    """
    Load an IDX image/label pair as a normalized, one-hot Dataset.

    Raises:
        IdxFormatError: wrong magic, truncated payload, count mismatch or a
            label outside [0, 9]
        FileNotFoundError: a path does not exist
    """
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise IdxFormatError(f"{images.shape[0]} images but {labels.shape[0]} labels")
    if labels.size and int(labels.max()) >= MNIST_CLASSES:
        raise IdxFormatError(f"{labels_path}: label {int(labels.max())} outside [0, 9]")
    x = normalize_pixels(images.reshape(images.shape[0], -1))
    logger.info(f"Loaded {x.shape[0]} instances ({x.shape[1]} features) from {images_path}")
    return Dataset(x=x, y=one_hot(labels, MNIST_CLASSES), name=name)


def write_idx_images(path: PathLike, images: np.ndarray) -> Path:
    """Write uint8 images of shape (n, rows, cols) with the IDX image header."""
    images = np.asarray(images, dtype=np.uint8)
    if images.ndim != 3:
        raise ValueError(f"Images must be (n, rows, cols), got {images.shape}")
    header = np.array([IDX_IMAGES_MAGIC, *images.shape], dtype=">u4")
    return _write(path, header.tobytes() + images.tobytes())


def write_idx_labels(path: PathLike, labels: np.ndarray) -> Path:
    labels = np.asarray(labels, dtype=np.uint8).reshape(-1)
    header = np.array([IDX_LABELS_MAGIC, labels.shape[0]], dtype=">u4")
    return _write(path, header.tobytes() + labels.tobytes())


def _write(path: PathLike, payload: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wb") as fh:
        fh.write(payload)
    return path
