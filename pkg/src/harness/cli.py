"""Command-line entry point: train, gradcheck, export-surface, compare."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.config.constants import CSV_FLOAT_FORMAT, SURFACE_Y_FIXED, TrainMode
from src.config.settings import get_settings
from src.harness.aggregate import summarize_runs
from src.harness.errors import ConfigError, RunError
from src.harness.gradcheck import run_gradcheck
from src.harness.records import write_surface
from src.harness.runner import run_experiment
from src.harness.schemas import ExperimentConfig, apply_overrides, load_config
from src.lossnet import export_loss_surface, load_loss_network, surface_grid
from src.metaloop import DivergenceError
from src.ndtensor import NonFiniteError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adalfl",
        description="Adaptive loss function learning experiments",
    )
    parser.add_argument("--log-level", default=None, help="Overrides ADALFL_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Run every (mode, seed) cell of an experiment")
    train.add_argument("--config", type=Path, default=None, help="Experiment JSON file")
    train.add_argument("--seeds", type=int, nargs="+", default=None)
    train.add_argument(
        "--modes", nargs="+", choices=[m.value for m in TrainMode], default=None
    )
    train.add_argument("--output-dir", default=None)
    train.add_argument("--s-train", type=int, default=None)
    train.add_argument("--s-init", type=int, default=None)
    train.add_argument("--s-inner", type=int, default=None)
    train.add_argument("--workers", type=int, default=None, help="Overrides ADALFL_WORKERS")

    grad = sub.add_parser("gradcheck", help="Compare analytic and finite-difference gradients")
    grad.add_argument("--seeds", type=int, default=10, help="Number of tiny instances")
    grad.add_argument("--s-inner", type=int, nargs="+", default=[1, 5])
    grad.add_argument("--width", type=int, default=8, help="Loss network width")
    grad.add_argument("--tolerance", type=float, default=1e-3)

    surface = sub.add_parser("export-surface", help="Evaluate a saved loss network on a grid")
    surface.add_argument("--loss-net", type=Path, required=True, help="Saved .npz loss network")
    surface.add_argument("--output", type=Path, default=None, help="CSV path (stdout if omitted)")
    surface.add_argument("--y-fixed", type=float, nargs="+", default=list(SURFACE_Y_FIXED))
    surface.add_argument("--points", type=int, default=None)

    compare = sub.add_parser("compare", help="Summarize final metrics as mean ± std per mode")
    compare.add_argument("paths", nargs="+", type=Path, help="Metrics CSVs or run directories")
    compare.add_argument("--split", default="test")
    compare.add_argument("--metric", choices=["error_rate", "task_loss"], default="error_rate")
    compare.add_argument("--output", type=Path, default=None)
    return parser


def configure_logging(level: Optional[str]) -> None:
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def _train(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    config = apply_overrides(
        config,
        seeds=args.seeds,
        modes=args.modes,
        output_dir=args.output_dir,
        s_train=args.s_train,
        s_init=args.s_init,
        s_inner=args.s_inner,
    )
    cells = run_experiment(config, workers=args.workers)
    for cell in cells:
        print(f"{cell.run_id}\t{cell.run_dir}")
    return 0


def _gradcheck(args: argparse.Namespace) -> int:
    if args.seeds < 1:
        raise ConfigError("--seeds must be at least 1")
    rows = run_gradcheck(range(args.seeds), args.s_inner, args.width, args.tolerance)
    print(f"{'suite':<14} {'case':<24} {'cosine':>10} {'max_error':>12}  ok")
    for row in rows:
        print(
            f"{row.suite:<14} {row.case:<24} {row.cosine:>10.6f} "
            f"{row.max_error:>12.3e}  {'yes' if row.passed else 'NO'}"
        )
    meta_errors = [r.max_error for r in rows if r.suite == "meta_gradient"]
    if meta_errors:
        print(f"max relative error (meta-gradient): {max(meta_errors):.3e}")
    return 0 if all(r.passed for r in rows) else 1


def _export_surface(args: argparse.Namespace) -> int:
    net = load_loss_network(args.loss_net)
    grid = surface_grid(args.points) if args.points else surface_grid()
    rows = [
        (y_fixed, f, loss)
        for y_fixed in args.y_fixed
        for f, loss in export_loss_surface(net, y_fixed, grid)
    ]
    if args.output:
        print(write_surface(rows, args.output))
    else:
        print("y_fixed,f,loss")
        for y_fixed, f, loss in rows:
            print(f"{y_fixed!r},{f!r},{loss!r}")
    return 0


def _compare(args: argparse.Namespace) -> int:
    summary = summarize_runs(args.paths, split=args.split, metric=args.metric)
    print(summary[["mode", "runs", "summary"]].to_string(index=False))
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        summary.to_csv(args.output, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        print(args.output)
    return 0


COMMANDS = {
    "train": _train,
    "gradcheck": _gradcheck,
    "export-surface": _export_surface,
    "compare": _compare,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv`` and run a subcommand.

    Returns:
        0 on success, 1 on a library error (bad config, missing files,
        divergence, failed gradient check), 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (RunError, DivergenceError) as exc:
        logger.error(f"Run diverged: {exc}")
        message = str(exc)
    except (ConfigError, FileNotFoundError, ValueError, NonFiniteError, OSError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        message = str(exc)
    print(f"error: {message}", file=sys.stderr)
    return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
