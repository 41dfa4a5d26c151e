"""Pydantic Settings for environment configuration."""

from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables (prefix ``ADALFL_``)."""

    model_config = SettingsConfigDict(
        env_prefix="ADALFL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Data
    data_dir: str = "data/mnist"
    mnist_base_url: str = "https://ossci-datasets.s3.amazonaws.com/mnist"
    download_timeout: int = 60

    # Outputs
    output_dir: str = "runs"

    # Execution
    workers: int = 1
    log_level: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
