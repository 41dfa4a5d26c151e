"""Dataset ingestion, synthetic tasks and batching."""

from src.data.dataset import DataSplits, Dataset, SplitSpec, one_hot, split
from src.data.idx import (
    IdxFormatError,
    load_idx,
    normalize_pixels,
    read_idx_images,
    read_idx_labels,
    write_idx_images,
    write_idx_labels,
)
from src.data.synthetic import synth_classification, synth_regression
from src.data.batching import Batch, BatchStream, batch_iter
from src.data.mnist_source import MnistDownloader, load_mnist, mnist_available

__all__ = [
    "DataSplits",
    "Dataset",
    "SplitSpec",
    "one_hot",
    "split",
    "IdxFormatError",
    "load_idx",
    "normalize_pixels",
    "read_idx_images",
    "read_idx_labels",
    "write_idx_images",
    "write_idx_labels",
    "synth_classification",
    "synth_regression",
    "Batch",
    "BatchStream",
    "batch_iter",
    "MnistDownloader",
    "load_mnist",
    "mnist_available",
]
