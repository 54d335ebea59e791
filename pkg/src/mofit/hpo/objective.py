"""Cross-validated tuning objective, computed on training data only."""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .. import algorithms
from ..dataset.split import kfold_indices
from ..dataset.types import EncodedDataset
from ..metrics import accuracy, rmse
from .study import DIRECTION_MAXIMIZE, DIRECTION_MINIMIZE

DEFAULT_FOLDS = 3


def direction_for(train: EncodedDataset) -> str:
    return DIRECTION_MAXIMIZE if train.target_kind.is_classification else DIRECTION_MINIMIZE


def _fit_seed(fold_seed: int, fold: int, params: dict) -> int:
    """Deterministic and trial-order independent, so identical params always
    get identical fits (the GA re-evaluates its elite)."""
    canon = json.dumps(params, sort_keys=True, default=float)
    digest = hashlib.sha256(f"{fold_seed}|{fold}|{canon}".encode()).digest()
    return int.from_bytes(digest[:8], "little") & 0x7FFFFFFFFFFFFFFF


def cv_objective(algorithm_id: str, params: dict, train: EncodedDataset,
                 k_folds: int = DEFAULT_FOLDS, seed: int = 0) -> float:
    """Mean k-fold accuracy (classification) or RMSE (regression) on train.

    Fold assignment depends only on (train, k_folds, seed), so every sampler
    of a study compares candidates on identical folds.  Classification folds
    are stratified; a fold missing a class is an error.
    """
    if k_folds < 2:
        raise ValueError("k_folds must be >= 2")
    is_cls = train.target_kind.is_classification
    folds = kfold_indices(train.n_rows, k_folds, seed,
                          y=train.y if is_cls else None)
    if is_cls:
        for f in folds:
            present = np.unique(train.y[np.setdiff1d(np.arange(train.n_rows), f)])
            if len(present) < train.target_kind.n_classes:
                raise ValueError("a training fold is missing a class")
    scores = []
    for i, valid_idx in enumerate(folds):
        train_idx = np.setdiff1d(np.arange(train.n_rows), valid_idx)
        fold_train = train.take(train_idx)
        fold_valid = train.take(valid_idx)
        model = algorithms.fit(algorithm_id, fold_train, params,
                               seed=_fit_seed(seed, i, params))
        pred = model.predict_batch(fold_valid.X)
        if is_cls:
            scores.append(accuracy(fold_valid.y, pred))
        else:
            scores.append(rmse(fold_valid.y, pred))
    return float(np.mean(scores))


def make_cv_objective(algorithm_id: str, train: EncodedDataset,
                      k_folds: int = DEFAULT_FOLDS, seed: int = 0):
    """Closure over the TRAINING split only; samplers never see test rows."""
    def objective(params: dict) -> float:
        return cv_objective(algorithm_id, params, train, k_folds=k_folds, seed=seed)
    return objective
