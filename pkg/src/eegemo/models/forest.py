"""Random forest of axis-aligned Gini decision trees.

Each tree is grown on a bootstrap sample (n draws with replacement from its
own seeded generator) and considers ``mtry`` randomly chosen features per
split.  The split maximizing the Gini impurity decrease wins; ties go to the
lowest feature index, then the lowest threshold.  Per-tree seeds are spawned
deterministically from the master seed, so a forest trained in parallel is
identical to one trained sequentially.  Prediction is the mode of the tree
votes, ties broken toward the lowest class index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError

N_CLASSES = 3


@dataclass(frozen=True)
class DecisionTree:
    """Flat-array tree: node i is a leaf iff feature[i] < 0."""

    feature: np.ndarray  # int
    threshold: np.ndarray  # float
    left: np.ndarray  # int child index
    right: np.ndarray
    leaf_label: np.ndarray  # int, -1 for internal nodes


@dataclass(frozen=True)
class RandomForestModel:
    trees: tuple[DecisionTree, ...]
    n_features: int
    seed: int
    mtry: int
    min_leaf: int
    max_depth: int | None
    bootstrap: bool

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _gini(counts: np.ndarray, total: int) -> float:
    p = counts / total
    return 1.0 - float((p**2).sum())


def _best_split_for_feature(values: np.ndarray, labels: np.ndarray, min_leaf: int):
    """(weighted child impurity, threshold) of the best cut, or None."""
    n = values.shape[0]
    order = np.argsort(values, kind="stable")
    v = values[order]
    lab = labels[order]
    one_hot = np.zeros((n, N_CLASSES))
    one_hot[np.arange(n), lab] = 1.0
    cum = np.cumsum(one_hot, axis=0)
    total = cum[-1]
    k = np.arange(1, n)  # k samples go left
    left = cum[:-1]
    right = total - left
    gini_left = 1.0 - ((left / k[:, None]) ** 2).sum(axis=1)
    gini_right = 1.0 - ((right / (n - k)[:, None]) ** 2).sum(axis=1)
    weighted = (k * gini_left + (n - k) * gini_right) / n
    valid = (v[1:] > v[:-1]) & (k >= min_leaf) & (n - k >= min_leaf)
    if not valid.any():
        return None
    weighted = np.where(valid, weighted, np.inf)
    best = int(np.argmin(weighted))  # first minimum -> lowest threshold
    return float(weighted[best]), float((v[best] + v[best + 1]) / 2.0)


def _grow_tree(x, y, rows, mtry, max_depth, min_leaf, rng) -> DecisionTree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    leaf_label: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_label.append(-1)
        return len(feature) - 1

    root = new_node()
    stack = [(root, rows, 0)]
    while stack:
        node, node_rows, depth = stack.pop()
        labels = y[node_rows]
        counts = np.bincount(labels, minlength=N_CLASSES)
        parent_gini = _gini(counts, node_rows.size)
        splittable = (
            parent_gini > 0.0
            and node_rows.size >= 2 * min_leaf
            and (max_depth is None or depth < max_depth)
        )
        best = None
        if splittable:
            candidates = np.sort(rng.choice(x.shape[1], size=mtry, replace=False))
            for f in candidates:
                found = _best_split_for_feature(x[node_rows, f], labels, min_leaf)
                if found is None:
                    continue
                impurity, cut = found
                if best is None or impurity < best[0]:
                    best = (impurity, int(f), cut)
            if best is not None and parent_gini - best[0] <= 0.0:
                best = None
        if best is None:
            leaf_label[node] = int(np.argmax(counts))
            continue
        _, f, cut = best
        feature[node] = f
        threshold[node] = cut
        go_left = x[node_rows, f] < cut
        left_child = new_node()
        right_child = new_node()
        left[node] = left_child
        right[node] = right_child
        # push right first so the left branch is grown first (fixed rng order)
        stack.append((right_child, node_rows[~go_left], depth + 1))
        stack.append((left_child, node_rows[go_left], depth + 1))

    return DecisionTree(
        np.asarray(feature, dtype=np.int64),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(leaf_label, dtype=np.int64),
    )


def _train_one_tree(x, y, seed_seq, mtry, max_depth, min_leaf, bootstrap) -> DecisionTree:
    rng = np.random.default_rng(seed_seq)
    n = x.shape[0]
    rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
    return _grow_tree(x, y, rows, mtry, max_depth, min_leaf, rng)


def train_rf(
    features,
    labels,
    n_trees: int = 100,
    mtry: int | None = None,
    max_depth: int | None = None,
    min_leaf: int = 1,
    seed: int = 0,
    bootstrap: bool = True,
    n_jobs: int = 1,
) -> RandomForestModel:
    """Grow the forest; identical output for any ``n_jobs`` given the same seed.

    ``mtry`` defaults to floor(sqrt(n_features)).  ``bootstrap=False`` is a
    diagnostic flag that trains every tree on the full sample.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be >= 1 or None")
    if mtry is None:
        mtry = max(1, int(np.sqrt(x.shape[1])))
    if not 1 <= mtry <= x.shape[1]:
        raise ValueError(f"mtry must be in [1, {x.shape[1]}], got {mtry}")
    seed_seqs = np.random.SeedSequence(seed).spawn(n_trees)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(
                pool.map(
                    lambda s: _train_one_tree(x, y, s, mtry, max_depth, min_leaf, bootstrap),
                    seed_seqs,
                )
            )
    else:
        trees = [
            _train_one_tree(x, y, s, mtry, max_depth, min_leaf, bootstrap) for s in seed_seqs
        ]
    return RandomForestModel(tuple(trees), x.shape[1], seed, mtry, min_leaf, max_depth, bootstrap)


def predict_tree(tree: DecisionTree, features: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    node = np.zeros(x.shape[0], dtype=np.int64)
    while True:
        feat = tree.feature[node]
        active = feat >= 0
        if not active.any():
            break
        rows = np.where(active)[0]
        goes_left = x[rows, feat[rows]] < tree.threshold[node[rows]]
        node[rows] = np.where(goes_left, tree.left[node[rows]], tree.right[node[rows]])
    return tree.leaf_label[node]


def predict_rf(model: RandomForestModel, features) -> np.ndarray:
    """Mode of the per-tree votes; ties go to the lowest class index."""
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if x.shape[1] != model.n_features:
        raise DimensionMismatchError(
            f"input has {x.shape[1]} features, model expects {model.n_features}"
        )
    votes = np.stack([predict_tree(tree, x) for tree in model.trees])
    out = np.empty(x.shape[0], dtype=np.int64)
    for i in range(x.shape[0]):
        out[i] = int(np.argmax(np.bincount(votes[:, i], minlength=N_CLASSES)))
    return out
