"""Tests for IDX ingestion, splits, synthetic tasks, batching and the MNIST client."""

import gzip

import httpx
import numpy as np
import pytest

from src.config.constants import MNIST_FILES, Split
from src.data import (
    BatchStream,
    DataSplits,
    Dataset,
    IdxFormatError,
    MnistDownloader,
    SplitSpec,
    batch_iter,
    load_idx,
    load_mnist,
    mnist_available,
    normalize_pixels,
    one_hot,
    split,
    synth_classification,
    synth_regression,
    write_idx_images,
    write_idx_labels,
)
from src.ndtensor import ShapeError


def test_load_idx(idx_dir):
    root, images, labels = idx_dir
    ds = load_idx(root / "images-idx3-ubyte", root / "labels-idx1-ubyte")
    assert (ds.n, ds.n_features, ds.n_outputs) == (5, 784, 10)
    np.testing.assert_allclose(ds.x[0], normalize_pixels(images[0].reshape(-1)))
    assert np.array_equal(np.argmax(ds.y, axis=1), labels)


def test_pixel_normalization():
    assert normalize_pixels(np.array([0], dtype=np.uint8))[0] == pytest.approx(-0.4242, abs=1e-4)


def test_swapped_magic_rejected(idx_dir):
    root, _, _ = idx_dir
    with pytest.raises(IdxFormatError):
        load_idx(root / "labels-idx1-ubyte", root / "labels-idx1-ubyte")


def test_truncated_payload_rejected(idx_dir):
    root, _, _ = idx_dir
    path = root / "images-idx3-ubyte"
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(IdxFormatError):
        load_idx(path, root / "labels-idx1-ubyte")


def test_count_mismatch_and_label_range(tmp_path):
    images = np.zeros((3, 28, 28), dtype=np.uint8)
    write_idx_images(tmp_path / "img", images)
    write_idx_labels(tmp_path / "short", np.array([1, 2]))
    write_idx_labels(tmp_path / "bad", np.array([1, 2, 10]))
    with pytest.raises(IdxFormatError):
        load_idx(tmp_path / "img", tmp_path / "short")
    with pytest.raises(IdxFormatError):
        load_idx(tmp_path / "img", tmp_path / "bad")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_idx(tmp_path / "nope", tmp_path / "nope")


def test_gzipped_files_load(tmp_path):
    write_idx_images(tmp_path / "img.gz", np.full((2, 28, 28), 255, dtype=np.uint8))
    write_idx_labels(tmp_path / "lab.gz", np.array([3, 9]))
    ds = load_idx(tmp_path / "img.gz", tmp_path / "lab.gz")
    assert ds.n == 2


def test_split_sizes_and_determinism():
    ds = Dataset(x=np.arange(200.0).reshape(100, 2), y=np.zeros((100, 1)))
    train, valid = split(ds, SplitSpec(valid_fraction=0.1, seed=3))
    assert (train.n, valid.n) == (90, 10)
    rows = np.concatenate([train.x[:, 0], valid.x[:, 0]])
    assert sorted(rows) == list(ds.x[:, 0])

    again, _ = split(ds, SplitSpec(valid_fraction=0.1, seed=3))
    assert np.array_equal(train.x, again.x)


def test_split_mnist_proportions():
    ds = Dataset(x=np.zeros((60000, 1)), y=np.zeros((60000, 1)))
    train, valid = split(ds, SplitSpec(valid_fraction=0.10, seed=0))
    assert (train.n, valid.n) == (54000, 6000)


def test_split_floors_the_training_share():
    ds = Dataset(x=np.arange(30.0).reshape(15, 2), y=np.zeros((15, 1)))
    train, valid = split(ds, SplitSpec(valid_fraction=0.1, seed=0))
    assert (train.n, valid.n) == (13, 2)


def test_named_splits_skip_empty_sets():
    full = Dataset(x=np.arange(40.0).reshape(20, 2), y=np.zeros((20, 1)))
    train, valid = split(full, SplitSpec(valid_fraction=0.25, seed=0))
    names = [name for name, _ in DataSplits(train=train, valid=valid, test=valid).named()]
    assert names == [Split.TRAIN.value, Split.VALID.value, Split.TEST.value]

    whole, empty = split(full, SplitSpec(valid_fraction=0.0, seed=0))
    assert [name for name, _ in DataSplits(train=whole, valid=empty).named()] == ["train"]


def test_split_without_validation():
    ds = Dataset(x=np.arange(10.0).reshape(5, 2), y=np.zeros((5, 1)))
    train, valid = split(ds, SplitSpec(valid_fraction=0.0, seed=1))
    assert valid.n == 0 and train.n == 5


def test_dataset_validation_and_immutability():
    with pytest.raises(ShapeError):
        Dataset(x=np.zeros((3, 2)), y=np.zeros((4, 1)))
    x = np.zeros((2, 2))
    ds = Dataset(x=x, y=np.zeros((2, 1)))
    x[0, 0] = 1.0
    assert ds.x[0, 0] == 0.0
    with pytest.raises(ValueError):
        ds.x[0, 0] = 5.0


def test_synthetic_determinism():
    a = synth_classification(50, 3, 2, separation=4.0, seed=11)
    b = synth_classification(50, 3, 2, separation=4.0, seed=11)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    assert np.all(a.y.sum(axis=0) == 25)


def test_noise_free_regression_is_linear():
    ds = synth_regression(40, 3, noise=0.0, seed=2)
    design = np.hstack([ds.x, np.ones((ds.n, 1))])
    coef, *_ = np.linalg.lstsq(design, ds.y, rcond=None)
    assert np.mean((design @ coef - ds.y) ** 2) < 1e-20


def test_batch_iter_sizes_and_coverage():
    ds = Dataset(x=np.arange(10.0).reshape(10, 1), y=one_hot(np.arange(10) % 2, 2))
    batches = list(batch_iter(ds, 3, seed=0, epoch=0))
    assert [len(x) for x, _ in batches] == [3, 3, 3, 1]
    assert sorted(np.concatenate([x[:, 0] for x, _ in batches])) == list(range(10))

    again = list(batch_iter(ds, 3, seed=0, epoch=0))
    assert all(np.array_equal(a[0], b[0]) for a, b in zip(batches, again))
    with pytest.raises(ValueError):
        list(batch_iter(ds, 0, seed=0, epoch=0))


def test_batch_stream_crosses_epochs():
    ds = Dataset(x=np.arange(4.0).reshape(4, 1), y=np.zeros((4, 1)))
    stream = BatchStream(ds, 3, seed=5)
    sizes = [len(x) for x, _ in stream.take(4)]
    assert sizes == [3, 1, 3, 1]
    assert stream.epoch == 1


def _mock_mnist(request: httpx.Request) -> httpx.Response:
    name = request.url.path.rsplit("/", 1)[-1]
    if "labels" in name:
        payload = np.array([0x801, 2], dtype=">u4").tobytes() + bytes([1, 7])
    else:
        payload = np.array([0x803, 2, 28, 28], dtype=">u4").tobytes() + bytes(2 * 784)
    return httpx.Response(200, content=gzip.compress(payload))


def test_downloader_fetches_and_loads(tmp_path):
    transport = httpx.MockTransport(_mock_mnist)
    downloader = MnistDownloader(base_url="https://mirror.test/mnist", transport=transport)
    paths = downloader.fetch(tmp_path)
    assert sorted(p.name for p in paths) == sorted(f"{stem}.gz" for stem in MNIST_FILES.values())
    assert mnist_available(tmp_path)

    train, test = load_mnist(tmp_path)
    assert train.n == 2 and test.n == 2
    assert np.array_equal(np.argmax(train.y, axis=1), [1, 7])


def test_downloader_raises_on_http_error(tmp_path):
    transport = httpx.MockTransport(lambda request: httpx.Response(404))
    with pytest.raises(httpx.HTTPStatusError):
        MnistDownloader(base_url="https://mirror.test", transport=transport).fetch(tmp_path)


def test_mnist_unavailable(tmp_path):
    assert not mnist_available(tmp_path)
