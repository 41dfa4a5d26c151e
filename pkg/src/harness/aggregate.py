"""Aggregate final metrics across runs into mean and standard deviation."""

import logging
from dataclasses import asdict
from pathlib import Path
from typing import Sequence, Union

import pandas as pd

from src.config.constants import METRICS_FILE, SUMMARY_COLUMNS, SUMMARY_DECIMALS
from src.harness.records import read_metrics

logger = logging.getLogger(__name__)


def discover_metrics(paths: Sequence[Union[str, Path]]) -> list[Path]:
    """Expand directories into the metrics files beneath them; files pass through."""
    found: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found.extend(sorted(path.rglob(METRICS_FILE)))
        elif path.exists():
            found.append(path)
        else:
            raise FileNotFoundError(f"No such metrics file or directory: {path}")
    if not found:
        raise FileNotFoundError("No metrics files found")
    return found


def final_rows(paths: Sequence[Union[str, Path]], split: str = "test") -> pd.DataFrame:
    """The last logged row on ``split`` from every metrics file."""
    rows = []
    for path in discover_metrics(paths):
        records = [r for r in read_metrics(path) if r.split == split]
        if not records:
            logger.warning(f"{path} has no '{split}' rows, skipping")
            continue
        last = max(records, key=lambda r: r.step)
        rows.append(asdict(last))
    if not rows:
        raise ValueError(f"No '{split}' rows in any metrics file")
    return pd.DataFrame(rows)


def format_summary(mean: float, std: float, decimals: int = SUMMARY_DECIMALS) -> str:
    return f"{mean:.{decimals}f}±{std:.{decimals}f}"


def summarize_runs(
    paths: Sequence[Union[str, Path]],
    split: str = "test",
    metric: str = "error_rate",
) -> pd.DataFrame:
    """
    Mean and sample standard deviation of the final ``metric`` per mode.

    A mode with a single run reports a standard deviation of 0.

    Returns:
        DataFrame with columns mode, runs, mean, std, summary ("0.0766±0.0009")
    """
    df = final_rows(paths, split)
    if metric not in ("error_rate", "task_loss"):
        raise ValueError(f"Unknown metric '{metric}'")
    values = df.dropna(subset=[metric])
    if values.empty:
        raise ValueError(f"Metric '{metric}' is empty for split '{split}'")

    grouped = values.groupby("mode", sort=True)[metric]
    summary = pd.DataFrame(
        {
            "runs": grouped.count(),
            "mean": grouped.mean(),
            "std": grouped.std(ddof=1).fillna(0.0),
        }
    ).reset_index()
    summary["summary"] = [format_summary(m, s) for m, s in zip(summary["mean"], summary["std"])]
    return summary[SUMMARY_COLUMNS]
