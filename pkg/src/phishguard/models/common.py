"""Shared training utilities: config, stratified folds, standardization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PhishguardError


@dataclass
class TrainConfig:
    folds: int = 5
    seed: int = 0
    max_epochs: int = 500
    learning_rate: float = 0.1
    early_stop_patience: int = 10
    standardize: bool = True

    def __post_init__(self):
        if self.folds < 2:
            raise PhishguardError("folds must be >= 2")
        if self.learning_rate <= 0:
            raise PhishguardError("learning_rate must be positive")


def stratified_fold_indices(y, k: int, seed: int) -> list[np.ndarray]:
    """Assign samples to k folds preserving the class ratio within one
    sample per fold: seeded shuffle within each class, then round-robin."""
    y = np.asarray(y)
    if k < 2:
        raise PhishguardError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in sorted(np.unique(y).tolist()):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        for pos, sample in enumerate(idx):
            folds[pos % k].append(int(sample))
    return [np.sort(np.array(f, dtype=int)) for f in folds]


class Standardizer:
    """Column-wise (x - mean) / std; constant columns map to 0."""

    def __init__(self):
        self.mean = None
        self.scale = None

    def fit(self, X) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def as_matrix(x, n_features: int) -> tuple[np.ndarray, bool]:
    """Accept one vector or a matrix; return (2-D array, was_single)."""
    from ..errors import DimensionMismatch

    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != n_features:
        raise DimensionMismatch(
            f"expected {n_features} features, got shape {x.shape}"
        )
    return x, single
