"""Whole-split evaluation of a base learner."""

import time

import numpy as np

from src.config.constants import TaskLossKind
from src.data import DataSplits
from src.metaloop.results import Evaluation
from src.models import BaseLearner, error_rate, predict, task_loss_value


class SplitEvaluator:
    """
    Scores a model on every non-empty split.

    Timestamps are seconds since construction and strictly increase across
    every row this evaluator emits.
    """

    def __init__(self, data: DataSplits, task: TaskLossKind):
        self.data = data
        self.task = task
        self._start = time.perf_counter()
        self._last = -np.inf

    def _clock(self) -> float:
        now = time.perf_counter() - self._start
        if now <= self._last:
            now = float(np.nextafter(self._last, np.inf))
        self._last = now
        return now

    def evaluate(self, step: int, model: BaseLearner) -> list[Evaluation]:
        rows = []
        for name, ds in self.data.named():
            outputs = predict(model, ds.x)
            loss = task_loss_value(self.task, ds.y, outputs)
            err = error_rate(ds.y, outputs) if self.task is TaskLossKind.CROSS_ENTROPY else None
            rows.append(Evaluation(step, name, loss, err, self._clock()))
        return rows
