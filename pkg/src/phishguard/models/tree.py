"""CART decision trees with Gini (classification) or squared-error
(regression) splits, plus the random-threshold mode used by extra-trees.

Tie-breaking is deterministic: among equally good splits the lowest
feature index wins, then the lowest threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datasets import Dataset
from ..errors import EmptyDataset
from .common import as_matrix


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: np.ndarray | None = None  # leaf payload

    @property
    def is_leaf(self) -> bool:
        return self.value is not None


@dataclass
class DecisionTree:
    root: TreeNode
    n_features: int
    max_depth: int
    task: str = "classify"  # classify | regress
    feature_names: tuple[str, ...] = ()

    kind = "tree"

    def _leaf_values(self, X: np.ndarray) -> np.ndarray:
        width = len(self.root.value) if self.root.is_leaf else 2
        # walk the tree once per node with boolean masks
        out = np.zeros((len(X), 0))
        results = {}

        def descend(node: TreeNode, idx: np.ndarray):
            if node.is_leaf:
                results[id(node)] = (idx, node.value)
                return
            go_left = X[idx, node.feature] <= node.threshold
            descend(node.left, idx[go_left])
            descend(node.right, idx[~go_left])

        all_idx = np.arange(len(X))
        descend(self.root, all_idx)
        width = len(next(iter(results.values()))[1])
        out = np.zeros((len(X), width))
        for idx, value in results.values():
            out[idx] = value
        return out

    def predict_proba(self, x):
        X, single = as_matrix(x, self.n_features)
        probs = self._leaf_values(X)[:, -1]
        return probs[0] if single else probs

    def predict_value(self, x):
        """Raw regression output (used by boosting)."""
        X, single = as_matrix(x, self.n_features)
        values = self._leaf_values(X)[:, 0]
        return values[0] if single else values

    def predict(self, x):
        return (np.asarray(self.predict_proba(x)) >= 0.5).astype(int)


def _best_threshold_gini(column, y, min_leaf):
    order = np.argsort(column, kind="stable")
    col = column[order]
    ys = y[order]
    n = len(ys)
    ones = np.cumsum(ys)  # ones in the left block after position i (1-based)
    total_ones = ones[-1]
    sizes_left = np.arange(1, n)
    boundaries = np.flatnonzero(col[1:] > col[:-1])  # split after index i
    if len(boundaries) == 0:
        return None
    nl = sizes_left[boundaries]
    nr = n - nl
    valid = (nl >= min_leaf) & (nr >= min_leaf)
    if not valid.any():
        return None
    boundaries = boundaries[valid]
    nl, nr = nl[valid], nr[valid]
    ones_l = ones[boundaries]
    ones_r = total_ones - ones_l
    gini_l = 1.0 - (ones_l / nl) ** 2 - ((nl - ones_l) / nl) ** 2
    gini_r = 1.0 - (ones_r / nr) ** 2 - ((nr - ones_r) / nr) ** 2
    score = (nl * gini_l + nr * gini_r) / n
    best = int(np.argmin(score))  # argmin takes the first (lowest threshold)
    i = boundaries[best]
    threshold = 0.5 * (col[i] + col[i + 1])
    return float(score[best]), threshold


def _best_threshold_sse(column, y, min_leaf):
    order = np.argsort(column, kind="stable")
    col = column[order]
    ys = y[order]
    n = len(ys)
    csum = np.cumsum(ys)
    csq = np.cumsum(ys ** 2)
    total_sum, total_sq = csum[-1], csq[-1]
    boundaries = np.flatnonzero(col[1:] > col[:-1])
    if len(boundaries) == 0:
        return None
    nl = boundaries + 1
    nr = n - nl
    valid = (nl >= min_leaf) & (nr >= min_leaf)
    if not valid.any():
        return None
    boundaries = boundaries[valid]
    nl, nr = nl[valid], nr[valid]
    sum_l = csum[boundaries]
    sq_l = csq[boundaries]
    sse_l = sq_l - sum_l ** 2 / nl
    sse_r = (total_sq - sq_l) - (total_sum - sum_l) ** 2 / nr
    score = sse_l + sse_r
    best = int(np.argmin(score))
    i = boundaries[best]
    threshold = 0.5 * (col[i] + col[i + 1])
    return float(score[best]), threshold


def _score_random_threshold(column, y, threshold, min_leaf, task):
    left = column <= threshold
    nl = int(left.sum())
    nr = len(y) - nl
    if nl < min_leaf or nr < min_leaf:
        return None
    yl, yr = y[left], y[~left]
    if task == "classify":
        def gini(v):
            p = v.mean()
            return 1.0 - p ** 2 - (1 - p) ** 2

        return (nl * gini(yl) + nr * gini(yr)) / len(y)
    return float(((yl - yl.mean()) ** 2).sum() + ((yr - yr.mean()) ** 2).sum())


def build_tree(
    X,
    y,
    *,
    task: str = "classify",
    max_depth: int = 8,
    min_samples_leaf: int = 1,
    split_mode: str = "best",
    rng: np.random.Generator | None = None,
    n_feature_subset: int | None = None,
    leaf_value_fn=None,
    feature_names: tuple[str, ...] = (),
) -> DecisionTree:
    """Greedy top-down tree induction.

    leaf_value_fn(indices) may override the leaf payload; boosting uses
    this for Newton leaf estimates.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(X) == 0:
        raise EmptyDataset("cannot grow a tree on no samples")
    if split_mode == "random" and rng is None:
        rng = np.random.default_rng(0)
    d = X.shape[1]

    def leaf(indices) -> TreeNode:
        if leaf_value_fn is not None:
            return TreeNode(value=np.atleast_1d(leaf_value_fn(indices)))
        ys = y[indices]
        if task == "classify":
            p1 = float(ys.mean())
            return TreeNode(value=np.array([1.0 - p1, p1]))
        return TreeNode(value=np.array([float(ys.mean())]))

    def choose_features(generator):
        if n_feature_subset is None or n_feature_subset >= d:
            return np.arange(d)
        return np.sort(generator.choice(d, size=n_feature_subset, replace=False))

    def grow(indices, depth) -> TreeNode:
        ys = y[indices]
        if depth >= max_depth or len(indices) < 2 * min_samples_leaf or np.all(ys == ys[0]):
            return leaf(indices)
        if rng is not None and n_feature_subset is not None:
            features = choose_features(rng)
        else:
            features = np.arange(d)
        best = None  # (score, feature, threshold)
        for j in features:
            column = X[indices, j]
            if split_mode == "random":
                lo, hi = column.min(), column.max()
                if lo == hi:
                    continue
                threshold = float(rng.uniform(lo, hi))
                score = _score_random_threshold(column, ys, threshold, min_samples_leaf, task)
                found = (score, threshold) if score is not None else None
            else:
                scan = _best_threshold_gini if task == "classify" else _best_threshold_sse
                found = scan(column, ys, min_samples_leaf)
            if found is None:
                continue
            score, threshold = found
            if best is None or score < best[0] - 1e-15:
                best = (score, int(j), threshold)
        if best is None:
            return leaf(indices)
        _, feature, threshold = best
        go_left = X[indices, feature] <= threshold
        left = grow(indices[go_left], depth + 1)
        right = grow(indices[~go_left], depth + 1)
        return TreeNode(feature=feature, threshold=threshold, left=left, right=right)

    root = grow(np.arange(len(X)), 0)
    return DecisionTree(root=root, n_features=d, max_depth=max_depth,
                        task=task, feature_names=feature_names)


def train_tree(
    ds: Dataset,
    max_depth: int = 8,
    min_samples_leaf: int = 1,
    split_mode: str = "best",
    seed: int = 0,
) -> DecisionTree:
    rng = np.random.default_rng(seed) if split_mode == "random" else None
    return build_tree(
        ds.X,
        ds.y,
        task="classify",
        max_depth=max_depth,
        min_samples_leaf=min_samples_leaf,
        split_mode=split_mode,
        rng=rng,
        feature_names=ds.feature_names,
    )
