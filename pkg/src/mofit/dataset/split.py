"""Deterministic train/test splitting."""

from __future__ import annotations

import numpy as np

from .. import kernels as K
from .types import EncodedDataset, SplitPair


def _shuffled(indices: np.ndarray, state: np.ndarray) -> np.ndarray:
    out = indices.copy()
    n = out.shape[0]
    for i in range(n - 1):
        j = i + int(K.prng_below(state, n - i))
        out[i], out[j] = out[j], out[i]
    return out


def split(ds: EncodedDataset, ratio: float, seed: int,
          stratified: bool = False) -> SplitPair:
    """Partition into train/test with floor(n * ratio) training rows.

    Stratified splitting allocates per-class training counts by largest
    remainder, which keeps every class proportion within one row of the
    full dataset's.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be in (0, 1)")
    n = ds.n_rows
    n_train = int(np.floor(n * ratio))
    if n_train == 0 or n_train == n:
        raise ValueError("ratio leaves an empty train or test side")
    state = K.new_state(seed, 0)

    if stratified:
        if not ds.target_kind.is_classification:
            raise ValueError("stratified split requires a class target")
        y = np.asarray(ds.y, dtype=np.int64)
        classes = np.unique(y)
        counts = {int(k): int((y == k).sum()) for k in classes}
        for k, c in counts.items():
            if c < 2:
                raise ValueError(f"class {k} has fewer than 2 rows")
        quotas = {k: c * n_train / n for k, c in counts.items()}
        base = {k: int(np.floor(q)) for k, q in quotas.items()}
        short = n_train - sum(base.values())
        order = sorted(classes, key=lambda k: (-(quotas[int(k)] - base[int(k)]), int(k)))
        for k in order[:short]:
            base[int(k)] += 1
        train_parts = []
        test_parts = []
        for k in classes:
            idx = _shuffled(np.flatnonzero(y == k), state)
            take = base[int(k)]
            train_parts.append(idx[:take])
            test_parts.append(idx[take:])
        train_idx = np.sort(np.concatenate(train_parts))
        test_idx = np.sort(np.concatenate(test_parts))
    else:
        perm = _shuffled(np.arange(n), state)
        train_idx = np.sort(perm[:n_train])
        test_idx = np.sort(perm[n_train:])

    return SplitPair(train=ds.take(train_idx), test=ds.take(test_idx),
                     seed=seed, ratio=ratio,
                     train_indices=train_idx, test_indices=test_idx)


def kfold_indices(n: int, k: int, seed: int,
                  y: np.ndarray | None = None) -> list[np.ndarray]:
    """Deterministic k-fold assignment; stratified when y is given."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError("more folds than rows")
    state = K.new_state(seed, 1)
    folds: list[list[int]] = [[] for _ in range(k)]
    if y is None:
        perm = _shuffled(np.arange(n), state)
        for pos, idx in enumerate(perm):
            folds[pos % k].append(int(idx))
    else:
        y = np.asarray(y, dtype=np.int64)
        offset = 0
        for cls in np.unique(y):
            idx = _shuffled(np.flatnonzero(y == cls), state)
            for pos, i in enumerate(idx):
                folds[(offset + pos) % k].append(int(i))
            offset += len(idx)
    return [np.sort(np.asarray(f, dtype=np.int64)) for f in folds]
