"""Download the MNIST IDX archives into the configured data directory."""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config.settings import get_settings
from src.data import MnistDownloader
from src.harness.cli import configure_logging


def fetch_mnist(force: bool = False):
    """Fetch any missing archive into ADALFL_DATA_DIR."""
    settings = get_settings()
    configure_logging(settings.log_level)

    paths = MnistDownloader().fetch(settings.data_dir, force=force)
    for path in paths:
        print(f"  {path}")
    print(f"MNIST ready in {settings.data_dir}")


if __name__ == "__main__":
    fetch_mnist(force="--force" in sys.argv[1:])
