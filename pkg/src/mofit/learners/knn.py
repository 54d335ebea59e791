"""K-nearest-neighbour models over z-score standardized features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels as K
from ..dataset.types import TASK_CLASSIFICATION, TASK_REGRESSION, EncodedDataset, TargetKind

WEIGHT_UNIFORM = "uniform"
WEIGHT_DISTANCE = "inverse-distance"


@dataclass(frozen=True)
class KNNParams:
    k: int = 5
    weighting: str = WEIGHT_UNIFORM

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.weighting not in (WEIGHT_UNIFORM, WEIGHT_DISTANCE):
            raise ValueError("weighting must be 'uniform' or 'inverse-distance'")


@dataclass
class KNNModel:
    task: str
    n_features: int
    params: KNNParams
    mean: np.ndarray
    inv_std: np.ndarray  # 0 where the training stddev was 0
    T: np.ndarray  # standardized training matrix
    y: np.ndarray
    target: TargetKind | None = None

    @property
    def n_classes(self) -> int:
        return self.target.n_classes if self.task == TASK_CLASSIFICATION else 0

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return np.ascontiguousarray((X - self.mean) * self.inv_std)

    def _weights(self, dist: np.ndarray) -> np.ndarray:
        if self.params.weighting == WEIGHT_UNIFORM:
            return np.ones_like(dist)
        w = np.zeros_like(dist)
        exact = dist == 0.0
        any_exact = exact.any(axis=1)
        with np.errstate(divide="ignore"):
            w[~any_exact] = 1.0 / dist[~any_exact]
        w[any_exact] = exact[any_exact].astype(np.float64)
        return w

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.task != TASK_CLASSIFICATION:
            raise ValueError("predict_proba requires a classification model")
        Q = self._check_input(X)
        idx, dist = K.knn_neighbors(Q, self.T, self.params.k)
        w = self._weights(dist)
        labels = self.y[idx]
        out = np.zeros((Q.shape[0], self.n_classes), dtype=np.float64)
        for k in range(self.n_classes):
            out[:, k] = np.where(labels == k, w, 0.0).sum(axis=1)
        out /= out.sum(axis=1, keepdims=True)
        return out

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        if self.task == TASK_CLASSIFICATION:
            return self.predict_proba(X).argmax(axis=1)
        Q = self._check_input(X)
        idx, dist = K.knn_neighbors(Q, self.T, self.params.k)
        w = self._weights(dist)
        return (self.y[idx] * w).sum(axis=1) / w.sum(axis=1)


def fit_knn(train: EncodedDataset, params: KNNParams) -> KNNModel:
    """Store standardized training data; all work happens at query time."""
    if train.n_rows == 0:
        raise ValueError("cannot fit KNN on an empty dataset")
    if params.k > train.n_rows:
        raise ValueError(f"k={params.k} exceeds {train.n_rows} training rows")
    target = train.target_kind
    X = np.asarray(train.X, dtype=np.float64)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    inv_std = np.where(std > 0.0, 1.0 / np.where(std > 0.0, std, 1.0), 0.0)
    T = np.ascontiguousarray((X - mean) * inv_std)
    if target.is_classification:
        y = np.ascontiguousarray(train.y, dtype=np.int64)
        task = TASK_CLASSIFICATION
    else:
        y = np.ascontiguousarray(train.y, dtype=np.float64)
        task = TASK_REGRESSION
    return KNNModel(task=task, n_features=train.n_features, params=params,
                    mean=mean, inv_std=inv_std, T=T, y=y, target=target)
