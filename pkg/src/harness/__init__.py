"""Experiment configuration, orchestration, CSV records and the command line."""

from src.harness.errors import ConfigError, RunError
from src.harness.schemas import (
    DatasetSpec,
    ExperimentConfig,
    LossNetSpec,
    apply_overrides,
    load_config,
    save_config,
)
from src.harness.records import (
    MetricsRecord,
    SnapshotRecord,
    TrajectoryRecord,
    read_metrics,
    read_snapshots,
    write_metrics,
    write_snapshots,
    write_surface,
    write_trajectory,
)
from src.harness.runner import CellOutput, load_task_data, run_cell, run_experiment
from src.harness.aggregate import discover_metrics, format_summary, summarize_runs
from src.harness.gradcheck import GradcheckRow, run_gradcheck

__all__ = [
    "ConfigError",
    "RunError",
    "DatasetSpec",
    "ExperimentConfig",
    "LossNetSpec",
    "apply_overrides",
    "load_config",
    "save_config",
    "MetricsRecord",
    "SnapshotRecord",
    "TrajectoryRecord",
    "read_metrics",
    "read_snapshots",
    "write_metrics",
    "write_snapshots",
    "write_surface",
    "write_trajectory",
    "CellOutput",
    "load_task_data",
    "run_cell",
    "run_experiment",
    "discover_metrics",
    "format_summary",
    "summarize_runs",
    "GradcheckRow",
    "run_gradcheck",
]
