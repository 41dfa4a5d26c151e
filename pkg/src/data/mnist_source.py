"""MNIST download client and on-disk loader."""

import logging
from pathlib import Path
from typing import Optional, Union

import httpx

from src.config.constants import MNIST_FILES
from src.config.settings import get_settings
from src.data.dataset import Dataset
from src.data.idx import load_idx

logger = logging.getLogger(__name__)


class MnistDownloader:
    """Client for fetching the four gzipped MNIST IDX archives."""

    def __init__(
        self,
        base_url: Optional[str] = None,
        timeout: Optional[int] = None,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        settings = get_settings()
        self.base_url = (base_url or settings.mnist_base_url).rstrip("/")
        self.timeout = timeout or settings.download_timeout
        self.transport = transport

    def fetch(self, target_dir: Union[str, Path], force: bool = False) -> list[Path]:
        """
        Download every archive not already present in ``target_dir``.

        Args:
            target_dir: Destination directory (created if missing)
            force: Re-download files that already exist

        Returns:
            Paths of the archives on disk
        """
        target = Path(target_dir)
        target.mkdir(parents=True, exist_ok=True)
        paths = []

        with httpx.Client(
            timeout=self.timeout, follow_redirects=True, transport=self.transport
        ) as client:
            for stem in MNIST_FILES.values():
                path = target / f"{stem}.gz"
                if path.exists() and not force:
                    logger.info(f"{path} already present, skipping")
                    paths.append(path)
                    continue
                url = f"{self.base_url}/{stem}.gz"
                response = client.get(url)
                response.raise_for_status()
                path.write_bytes(response.content)
                logger.info(f"Downloaded {url} ({len(response.content)} bytes)")
                paths.append(path)

        return paths


def _locate(data_dir: Path, stem: str) -> Path:
    for candidate in (data_dir / stem, data_dir / f"{stem}.gz"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"MNIST file '{stem}' (or .gz) not found in {data_dir}")


def mnist_available(data_dir: Union[str, Path]) -> bool:
    try:
        for stem in MNIST_FILES.values():
            _locate(Path(data_dir), stem)
    except FileNotFoundError:
        return False
    return True


def load_mnist(data_dir: Union[str, Path]) -> tuple[Dataset, Dataset]:
    """Load the MNIST train and test sets (raw or gzipped IDX) from ``data_dir``."""
    root = Path(data_dir)
    train = load_idx(
        _locate(root, MNIST_FILES["train_images"]),
        _locate(root, MNIST_FILES["train_labels"]),
        name="mnist",
    )
    test = load_idx(
        _locate(root, MNIST_FILES["test_images"]),
        _locate(root, MNIST_FILES["test_labels"]),
        name="mnist/test",
    )
    return train, test
