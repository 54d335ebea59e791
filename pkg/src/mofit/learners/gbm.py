"""Gradient-boosted trees with L2-regularized leaf weights.

Squared loss for regression; one-tree-per-class softmax for K-class
classification.  Leaf values are -G/(H + lambda) with the learning rate
folded in at fit time, so prediction is base score plus a plain sum over
stored trees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels as K
from ..dataset.types import TASK_CLASSIFICATION, TASK_REGRESSION, EncodedDataset, TargetKind


@dataclass(frozen=True)
class GBMParams:
    n_rounds: int = 100
    learning_rate: float = 0.1
    lam: float = 1.0
    max_depth: int = 6
    min_child_weight: float = 0.0
    subsample: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_rounds < 0:
            raise ValueError("n_rounds must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_child_weight < 0.0:
            raise ValueError("min_child_weight must be >= 0")
        if not 0.0 < self.subsample <= 1.0:
            raise ValueError("subsample must be in (0, 1]")


@dataclass
class BoostedTree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # learning-rate-scaled leaf updates


@dataclass
class GBMModel:
    task: str
    n_features: int
    params: GBMParams
    base_score: np.ndarray  # shape (1,) regression, (K,) classification
    rounds: list[list[BoostedTree]]  # one tree per round (reg) or K per round
    target: TargetKind | None = None

    @property
    def n_classes(self) -> int:
        return int(self.base_score.shape[0]) if self.task == TASK_CLASSIFICATION else 0

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return X

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = self._check_input(X)
        n = X.shape[0]
        if self.task == TASK_REGRESSION:
            out = np.full(n, self.base_score[0], dtype=np.float64)
            for rnd in self.rounds:
                tree = rnd[0]
                K.tree_add_values(X, tree.feature, tree.threshold, tree.left,
                                  tree.right, tree.value, out)
            return out
        scores = np.tile(self.base_score, (n, 1))
        col = np.zeros(n, dtype=np.float64)
        for rnd in self.rounds:
            for k, tree in enumerate(rnd):
                col[:] = 0.0
                K.tree_add_values(X, tree.feature, tree.threshold, tree.left,
                                  tree.right, tree.value, col)
                scores[:, k] += col
        return scores

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.task != TASK_CLASSIFICATION:
            raise ValueError("predict_proba requires a classification model")
        return _softmax(self.decision_scores(X))

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        if self.task == TASK_CLASSIFICATION:
            return self.predict_proba(X).argmax(axis=1)
        return self.decision_scores(X)


def _softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _grow_gradient_tree(XTs: np.ndarray, g: np.ndarray, h: np.ndarray,
                        params: GBMParams, order: np.ndarray,
                        state: np.ndarray) -> BoostedTree:
    n_feat = XTs.shape[0]
    feature, threshold, left, right, value = K.grow_tree_reg(
        XTs, np.ascontiguousarray(g), np.ascontiguousarray(h),
        params.lam, params.min_child_weight, order, K.EMPTY_ROWS,
        K.SPLIT_EXACT, params.max_depth, 2, 1, n_feat, state)
    value *= params.learning_rate
    return BoostedTree(feature, threshold, left, right, value)


def fit_gbm(train: EncodedDataset, params: GBMParams) -> GBMModel:
    """Sequential boosting; row subsets per round are drawn from the seed."""
    if train.n_rows == 0:
        raise ValueError("cannot fit a GBM on an empty dataset")
    target = train.target_kind
    n = train.n_rows
    X = np.ascontiguousarray(np.asarray(train.X, dtype=np.float64))
    XT = K.feature_major(X)
    state = K.new_state(params.seed, 0)
    n_sub = max(1, int(params.subsample * n))

    if not target.is_classification:
        y = np.ascontiguousarray(train.y, dtype=np.float64)
        base = float(np.mean(y))
        pred = np.full(n, base, dtype=np.float64)
        rounds: list[list[BoostedTree]] = []
        for _ in range(params.n_rounds):
            if n_sub < n:
                sub = np.asarray(K.sample_without_replacement(n, n_sub, state))
                XTs = np.ascontiguousarray(XT[:, sub])
                g = pred[sub] - y[sub]
                h = np.ones(n_sub, dtype=np.float64)
            else:
                XTs = XT
                g = pred - y
                h = np.ones(n, dtype=np.float64)
            order = K.presort(XTs)
            tree = _grow_gradient_tree(XTs, g, h, params, order, state)
            K.tree_add_values(X, tree.feature, tree.threshold, tree.left,
                              tree.right, tree.value, pred)
            rounds.append([tree])
        return GBMModel(task=TASK_REGRESSION, n_features=train.n_features,
                        params=params, base_score=np.array([base]), rounds=rounds,
                        target=target)

    y = np.ascontiguousarray(train.y, dtype=np.int64)
    n_classes = target.n_classes
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    base = np.log(np.maximum(counts / n, 1e-12))
    scores = np.tile(base, (n, 1))
    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0
    col = np.zeros(n, dtype=np.float64)
    rounds = []
    for _ in range(params.n_rounds):
        probs = _softmax(scores)
        if n_sub < n:
            sub = np.asarray(K.sample_without_replacement(n, n_sub, state))
            XTs = np.ascontiguousarray(XT[:, sub])
            p_sub = probs[sub]
            onehot_sub = onehot[sub]
        else:
            XTs = XT
            p_sub = probs
            onehot_sub = onehot
        order0 = K.presort(XTs)
        rnd: list[BoostedTree] = []
        for k in range(n_classes):
            g = p_sub[:, k] - onehot_sub[:, k]
            h = p_sub[:, k] * (1.0 - p_sub[:, k])
            order = order0.copy() if k < n_classes - 1 else order0
            tree = _grow_gradient_tree(XTs, g, h, params, order, state)
            col[:] = 0.0
            K.tree_add_values(X, tree.feature, tree.threshold, tree.left,
                              tree.right, tree.value, col)
            scores[:, k] += col
            rnd.append(tree)
        rounds.append(rnd)
    return GBMModel(task=TASK_CLASSIFICATION, n_features=train.n_features,
                    params=params, base_score=base, rounds=rounds, target=target)
