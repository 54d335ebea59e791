"""Evaluation metrics: accuracy for classification, RMSE/MAE/MAPE for regression.

MAPE is reported as a fraction (0.022 == 2.2%), matching how the benchmark
tables are read downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset.types import TASK_CLASSIFICATION, TASK_REGRESSION


def _paired(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] == 0:
        raise ValueError("empty vectors")
    return x, y


def accuracy(truth, pred) -> float:
    """Fraction of positions where pred equals truth."""
    t = np.asarray(truth).ravel()
    p = np.asarray(pred).ravel()
    if t.shape[0] != p.shape[0]:
        raise ValueError(f"length mismatch: {t.shape[0]} vs {p.shape[0]}")
    if t.shape[0] == 0:
        raise ValueError("empty vectors")
    return float(np.mean(t == p))


def rmse(x, y) -> float:
    x, y = _paired(x, y)
    return float(np.sqrt(np.mean((x - y) ** 2)))


def mae(x, y) -> float:
    x, y = _paired(x, y)
    return float(np.mean(np.abs(x - y)))


def mape(x, y) -> float:
    """Mean absolute percentage error as a fraction; actuals must be nonzero."""
    x, y = _paired(x, y)
    if (x == 0).any():
        raise ValueError("mape undefined: actual value of 0 encountered")
    return float(np.mean(np.abs(x - y) / np.abs(x)))


@dataclass(frozen=True)
class MetricsReport:
    task: str
    n: int
    accuracy: float | None = None
    rmse: float | None = None
    mae: float | None = None
    mape: float | None = None

    def as_dict(self) -> dict:
        if self.task == TASK_CLASSIFICATION:
            return {"accuracy": self.accuracy}
        return {"rmse": self.rmse, "mae": self.mae, "mape": self.mape}


def classification_report(truth, pred) -> MetricsReport:
    return MetricsReport(task=TASK_CLASSIFICATION, n=len(np.asarray(truth).ravel()),
                         accuracy=accuracy(truth, pred))


def regression_report(truth, pred) -> MetricsReport:
    x, y = _paired(truth, pred)
    return MetricsReport(task=TASK_REGRESSION, n=x.shape[0],
                         rmse=rmse(x, y), mae=mae(x, y), mape=mape(x, y))
