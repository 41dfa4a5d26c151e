"""CSV records for metrics, loss-surface snapshots and parameter trajectories."""

import logging
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd

from src.config.constants import (
    CSV_FLOAT_FORMAT,
    METRICS_COLUMNS,
    SNAPSHOT_COLUMNS,
    SURFACE_COLUMNS,
    TRAJECTORY_COLUMNS,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricsRecord:
    """One evaluation row. ``error_rate`` is None for regression tasks."""

    run_id: str
    mode: str
    seed: int
    step: int
    split: str
    task_loss: float
    error_rate: Optional[float]
    wall_clock_s: float

    def __post_init__(self) -> None:
        if self.error_rate is not None and not 0.0 <= self.error_rate <= 1.0:
            raise ValueError(f"error_rate must lie in [0, 1], got {self.error_rate}")


@dataclass(frozen=True)
class SnapshotRecord:
    run_id: str
    seed: int
    step: int
    y_fixed: float
    f: float
    loss: float


@dataclass(frozen=True)
class TrajectoryRecord:
    run_id: str
    mode: str
    seed: int
    step: int
    theta_norm: float
    update_norm: float
    phi_norm: float
    learned_loss: float


def _write(rows: Sequence, columns: list[str], path: Union[str, Path], what: str) -> Path:
    if not rows:
        raise ValueError(f"No {what} records to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = [r if isinstance(r, tuple) else astuple(r) for r in rows]
    df = pd.DataFrame(table, columns=columns)
    df.to_csv(
        path,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )
    logger.info(f"Wrote {len(df)} {what} rows to {path}")
    return path


def _read(path: Union[str, Path], columns: list[str]) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"CSV file not found: {path}")
    df = pd.read_csv(
        path,
        dtype={"run_id": str, "mode": str, "split": str},
        float_precision="round_trip",
        encoding="utf-8",
    )
    if list(df.columns) != columns:
        raise ValueError(f"{path}: expected columns {columns}, found {list(df.columns)}")
    return df


def write_metrics(records: Sequence[MetricsRecord], path: Union[str, Path]) -> Path:
    """
    Write metrics rows with the fixed header, LF line endings and 17 significant digits.

    Raises:
        ValueError: ``records`` is empty (no file is created)
    """
    return _write(records, METRICS_COLUMNS, path, "metrics")


def write_snapshots(records: Sequence[SnapshotRecord], path: Union[str, Path]) -> Path:
    return _write(records, SNAPSHOT_COLUMNS, path, "snapshot")


def write_trajectory(records: Sequence[TrajectoryRecord], path: Union[str, Path]) -> Path:
    return _write(records, TRAJECTORY_COLUMNS, path, "trajectory")


def write_surface(rows: Sequence[tuple[float, float, float]], path: Union[str, Path]) -> Path:
    """(y_fixed, f, loss) rows of a single exported loss surface."""
    return _write(list(rows), SURFACE_COLUMNS, path, "surface")


def read_metrics(path: Union[str, Path]) -> list[MetricsRecord]:
    df = _read(path, METRICS_COLUMNS)
    records = []
    for row in df.itertuples(index=False):
        error = None if pd.isna(row.error_rate) else float(row.error_rate)
        records.append(
            MetricsRecord(
                run_id=row.run_id,
                mode=row.mode,
                seed=int(row.seed),
                step=int(row.step),
                split=row.split,
                task_loss=float(row.task_loss),
                error_rate=error,
                wall_clock_s=float(row.wall_clock_s),
            )
        )
    return records


def read_snapshots(path: Union[str, Path]) -> list[SnapshotRecord]:
    df = _read(path, SNAPSHOT_COLUMNS)
    names = [f.name for f in fields(SnapshotRecord)]
    return [
        SnapshotRecord(
            run_id=str(row.run_id),
            seed=int(row.seed),
            step=int(row.step),
            y_fixed=float(row.y_fixed),
            f=float(row.f),
            loss=float(row.loss),
        )
        for row in df[names].itertuples(index=False)
    ]
