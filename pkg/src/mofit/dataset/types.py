"""Core data containers shared by the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SOURCE_OBESITY = "obesity"
SOURCE_BODYFAT = "bodyfat"

TASK_CLASSIFICATION = "classification"
TASK_REGRESSION = "regression"


@dataclass(frozen=True)
class TargetKind:
    """What the y vector means: ordered class labels or a real quantity."""

    kind: str  # "classes" | "real"
    labels: tuple[str, ...] = ()
    units: str = ""

    @property
    def is_classification(self) -> bool:
        return self.kind == "classes"

    @property
    def n_classes(self) -> int:
        return len(self.labels)


@dataclass
class RawTable:
    """A loaded CSV: header plus rows of text/number cells."""

    column_names: list[str]
    rows: list[list]
    source_id: str

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_columns(self) -> int:
        return len(self.column_names)

    def column(self, name: str) -> list:
        idx = self.column_names.index(name)
        return [row[idx] for row in self.rows]


@dataclass
class EncodedDataset:
    """Numeric feature matrix + target vector, the common learner currency."""

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    target_kind: TargetKind
    # index groups that came from one-hot expansion, for invariant checks
    one_hot_groups: list[list[int]] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def take(self, indices: np.ndarray) -> "EncodedDataset":
        return EncodedDataset(
            X=self.X[indices],
            y=self.y[indices],
            feature_names=list(self.feature_names),
            target_kind=self.target_kind,
            one_hot_groups=[list(g) for g in self.one_hot_groups],
        )

    def validate(self) -> None:
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError("X and y row counts differ")
        if len(self.feature_names) != self.X.shape[1]:
            raise ValueError("feature_names length mismatch")
        if not np.isfinite(self.X).all():
            raise ValueError("X contains NaN or infinite entries")
        if self.target_kind.is_classification:
            if self.y.dtype.kind not in "iu":
                raise ValueError("classification target must be integer class indices")
            if self.y.min() < 0 or self.y.max() >= self.target_kind.n_classes:
                raise ValueError("class index out of range")
        elif not np.isfinite(self.y).all():
            raise ValueError("y contains NaN or infinite entries")
        for group in self.one_hot_groups:
            sums = self.X[:, group].sum(axis=1)
            if not np.allclose(sums, 1.0, atol=1e-12):
                raise ValueError("one-hot group rows do not sum to 1")


@dataclass
class SplitPair:
    """Train/test partition of one EncodedDataset."""

    train: EncodedDataset
    test: EncodedDataset
    seed: int
    ratio: float
    train_indices: np.ndarray
    test_indices: np.ndarray
