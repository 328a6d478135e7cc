"""Binary classifiers over sparse TF-IDF vectors: Perceptron and Random Forest.

Both are deterministic given (data, hyperparameters, seed). Defaults mirror
the conventional ones: forest of 100 trees, ceil(sqrt(V)) candidate features
per node, Gini criterion, bootstrap on, unlimited depth; perceptron with
learning rate 1, at most 1000 epochs, per-epoch shuffle, early stop on a
clean epoch.

Models serialize to versioned JSON; trees are encoded as flat node arrays
with child indices (-1 feature marks a leaf).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArtifactMismatchError, LoadError
from .vectorize import SparseVector

FORMAT_VERSION = 1

_SEED_MASK = 0xFFFF_FFFF_FFFF_FFFF


# ---------------------------------------------------------------------------
# Perceptron

@dataclass
class PerceptronModel:
    weights: np.ndarray
    bias: float
    epochs_run: int
    seed: int

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])


def _as_arrays(X: list[SparseVector], n_features: int | None) -> tuple[list, list, int]:
    if n_features is None:
        n_features = max((x.indices[-1] + 1 for x in X if x.indices), default=0)
    idx_arrays = []
    val_arrays = []
    for x in X:
        if x.indices and x.indices[-1] >= n_features:
            raise ValueError(
                f"feature index {x.indices[-1]} out of range for dimensionality {n_features}"
            )
        idx_arrays.append(np.asarray(x.indices, dtype=np.intp))
        val_arrays.append(np.asarray(x.values, dtype=np.float64))
    return idx_arrays, val_arrays, n_features


def _check_labels(X, y) -> np.ndarray:
    if len(X) != len(y):
        raise ValueError(f"{len(X)} samples but {len(y)} labels")
    if len(X) == 0:
        raise ValueError("cannot train on an empty dataset")
    arr = np.asarray(y, dtype=np.int64)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    return arr


def train_perceptron(
    X: list[SparseVector],
    y,
    epochs: int = 1000,
    seed: int = 0,
    n_features: int | None = None,
    learning_rate: float = 1.0,
) -> PerceptronModel:
    """Classic online perceptron with labels mapped to {-1, +1}.

    On a misclassification (y * (w.x + b) <= 0): w += lr*y*x, b += lr*y.
    Samples are reshuffled each epoch by the seeded RNG; training stops early
    after an epoch with zero updates.
    """
    labels = _check_labels(X, y)
    idx_arrays, val_arrays, n_features = _as_arrays(X, n_features)
    targets = np.where(labels == 1, 1.0, -1.0)

    rng = np.random.default_rng(seed)
    w = np.zeros(n_features, dtype=np.float64)
    b = 0.0
    epochs_run = 0
    for _ in range(epochs):
        epochs_run += 1
        updates = 0
        for i in rng.permutation(len(X)):
            t = targets[i]
            score = float(w[idx_arrays[i]] @ val_arrays[i]) + b
            if t * score <= 0.0:
                w[idx_arrays[i]] += learning_rate * t * val_arrays[i]
                b += learning_rate * t
                updates += 1
        if updates == 0:
            break
    return PerceptronModel(weights=w, bias=b, epochs_run=epochs_run, seed=seed)


def perceptron_decision(model: PerceptronModel, x: SparseVector) -> float:
    """Raw margin w.x + b."""
    if x.indices and x.indices[-1] >= model.n_features:
        raise ValueError("vector dimensionality exceeds the model's")
    idx = np.asarray(x.indices, dtype=np.intp)
    vals = np.asarray(x.values, dtype=np.float64)
    return float(model.weights[idx] @ vals) + model.bias


def predict_perceptron(model: PerceptronModel, x: SparseVector) -> int:
    """1 iff w.x + b > 0; the exact-zero tie goes to class 0."""
    return 1 if perceptron_decision(model, x) > 0.0 else 0


# ---------------------------------------------------------------------------
# Random forest

@dataclass
class DecisionTree:
    """Flat node arrays; node 0 is the root, feature -1 marks a leaf."""

    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    counts: list[tuple[int, int]]  # (class-0 weight, class-1 weight) per node
    leaf_class: list[int]          # -1 on split nodes

    def predict(self, x: SparseVector) -> int:
        node = 0
        while self.feature[node] != -1:
            if x.value_at(self.feature[node]) <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.leaf_class[node]

    def depth(self) -> int:
        depths = [0] * len(self.feature)
        best = 0
        for node in range(len(self.feature)):
            if self.feature[node] != -1:
                for child in (self.left[node], self.right[node]):
                    depths[child] = depths[node] + 1
                    best = max(best, depths[child])
        return best


@dataclass
class ForestModel:
    trees: list[DecisionTree]
    n_trees: int
    max_features: str = "sqrt"
    seed: int = 0
    n_features: int = 0
    max_depth: int | None = None


def _best_threshold(col: np.ndarray, labels: np.ndarray, weights: np.ndarray):
    """Best Gini split of one column; returns (weighted_impurity, threshold) or None.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values; the lowest threshold wins impurity ties.
    """
    order = np.argsort(col, kind="stable")
    cs = col[order]
    ws = weights[order].astype(np.float64)
    w1 = ws * labels[order]
    cum_w = np.cumsum(ws)
    cum_w1 = np.cumsum(w1)
    total = cum_w[-1]
    total1 = cum_w1[-1]

    cut = np.nonzero(cs[:-1] < cs[1:])[0]
    if cut.size == 0:
        return None
    thr = (cs[cut] + cs[cut + 1]) / 2.0
    # Guard against midpoint rounding collapsing onto a neighbor value.
    ok = (thr >= cs[cut]) & (thr < cs[cut + 1])
    if not ok.all():
        cut = cut[ok]
        thr = thr[ok]
        if cut.size == 0:
            return None

    nl = cum_w[cut]
    nl1 = cum_w1[cut]
    nl0 = nl - nl1
    nr = total - nl
    nr1 = total1 - nl1
    nr0 = nr - nr1
    gini_l = 1.0 - (nl0 / nl) ** 2 - (nl1 / nl) ** 2
    gini_r = 1.0 - (nr0 / nr) ** 2 - (nr1 / nr) ** 2
    weighted = (nl * gini_l + nr * gini_r) / total
    j = int(np.argmin(weighted))  # first minimum = lowest threshold
    return float(weighted[j]), float(thr[j])


class _Csc:
    """Column-major view of a sparse sample matrix."""

    def __init__(self, X: list[SparseVector], n_features: int):
        rows: list[list[int]] = [[] for _ in range(n_features)]
        vals: list[list[float]] = [[] for _ in range(n_features)]
        for r, x in enumerate(X):
            for i, v in zip(x.indices, x.values):
                rows[i].append(r)
                vals[i].append(v)
        self.rows = [np.asarray(r, dtype=np.intp) for r in rows]
        self.vals = [np.asarray(v, dtype=np.float64) for v in vals]


def _grow_tree(
    csc: _Csc,
    y: np.ndarray,
    row_weight: np.ndarray,
    n_features: int,
    rng: np.random.Generator,
    max_depth: int | None,
) -> DecisionTree:
    tree = DecisionTree([], [], [], [], [], [])
    pos = np.full(y.shape[0], -1, dtype=np.intp)
    k = math.ceil(math.sqrt(n_features))

    rows0 = np.nonzero(row_weight)[0]
    # Stack items: (rows, weights, depth, parent slot, is_left); LIFO with the
    # right child pushed first keeps node creation in preorder.
    stack = [(rows0, row_weight[rows0], 0, -1, False)]
    while stack:
        rows, w, depth, parent, is_left = stack.pop()
        slot = len(tree.feature)
        if parent >= 0:
            if is_left:
                tree.left[parent] = slot
            else:
                tree.right[parent] = slot

        yb = y[rows]
        c1 = int(w[yb == 1].sum())
        c0 = int(w.sum()) - c1
        total = c0 + c1

        split = None
        if c0 > 0 and c1 > 0 and total >= 2 and (max_depth is None or depth < max_depth):
            parent_gini = 1.0 - (c0 / total) ** 2 - (c1 / total) ** 2
            feats = np.sort(rng.choice(n_features, size=k, replace=False))
            pos[rows] = np.arange(rows.shape[0])
            best_col = None
            for f in feats:
                p = pos[csc.rows[f]]
                hit = p >= 0
                col = np.zeros(rows.shape[0], dtype=np.float64)
                col[p[hit]] = csc.vals[f][hit]
                found = _best_threshold(col, yb, w)
                if found is None:
                    continue
                impurity, threshold = found
                if split is None or impurity < split[0]:
                    split = (impurity, int(f), threshold)
                    best_col = col
            pos[rows] = -1
            if split is not None and split[0] >= parent_gini:
                split = None  # no candidate strictly reduces impurity

        if split is None:
            tree.feature.append(-1)
            tree.threshold.append(0.0)
            tree.left.append(-1)
            tree.right.append(-1)
            tree.counts.append((c0, c1))
            tree.leaf_class.append(1 if c1 > c0 else 0)
            continue

        _, f, threshold = split
        left_mask = best_col <= threshold
        tree.feature.append(f)
        tree.threshold.append(threshold)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.counts.append((c0, c1))
        tree.leaf_class.append(-1)
        stack.append((rows[~left_mask], w[~left_mask], depth + 1, slot, False))
        stack.append((rows[left_mask], w[left_mask], depth + 1, slot, True))
    return tree


def train_forest(
    X: list[SparseVector],
    y,
    n_trees: int = 100,
    seed: int = 0,
    max_depth: int | None = None,
    n_features: int | None = None,
) -> ForestModel:
    """Bootstrap-aggregated Gini trees with sqrt-feature sampling per node.

    Tree i draws from an independent RNG stream seeded with (seed XOR i), so
    results do not depend on training order.
    """
    labels = _check_labels(X, y)
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    _, _, n_features = _as_arrays(X, n_features)
    n_features = max(n_features, 1)
    csc = _Csc(X, n_features)
    n = len(X)

    trees = []
    for i in range(n_trees):
        rng = np.random.default_rng((seed ^ i) & _SEED_MASK)
        draws = rng.integers(0, n, size=n)
        weight = np.bincount(draws, minlength=n)
        trees.append(_grow_tree(csc, labels, weight, n_features, rng, max_depth))
    return ForestModel(
        trees=trees,
        n_trees=n_trees,
        seed=seed,
        n_features=n_features,
        max_depth=max_depth,
    )


def forest_votes(model: ForestModel, x: SparseVector) -> int:
    return sum(tree.predict(x) for tree in model.trees)


def forest_decision(model: ForestModel, x: SparseVector) -> float:
    """Fraction of trees voting for class 1."""
    return forest_votes(model, x) / model.n_trees


def predict_forest(model: ForestModel, x: SparseVector) -> int:
    """Majority vote over trees; an exact tie goes to class 0."""
    return 1 if 2 * forest_votes(model, x) > model.n_trees else 0


# ---------------------------------------------------------------------------
# Serialization

def save_classifier(model: PerceptronModel | ForestModel, path: str | Path) -> None:
    if isinstance(model, PerceptronModel):
        payload = {
            "format_version": FORMAT_VERSION,
            "kind": "perceptron",
            "weights": [float(v) for v in model.weights],
            "bias": model.bias,
            "epochs_run": model.epochs_run,
            "seed": model.seed,
            "n_features": model.n_features,
        }
    elif isinstance(model, ForestModel):
        payload = {
            "format_version": FORMAT_VERSION,
            "kind": "forest",
            "n_trees": model.n_trees,
            "max_features": model.max_features,
            "seed": model.seed,
            "n_features": model.n_features,
            "max_depth": model.max_depth,
            "trees": [
                {
                    "feature": t.feature,
                    "threshold": t.threshold,
                    "left": t.left,
                    "right": t.right,
                    "counts": [list(c) for c in t.counts],
                    "leaf_class": t.leaf_class,
                }
                for t in model.trees
            ],
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_classifier(path: str | Path) -> PerceptronModel | ForestModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read model {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"model {path} is not valid JSON: {exc}") from exc
    if payload.get("format_version") != FORMAT_VERSION:
        raise ArtifactMismatchError(
            f"model {path} has format_version {payload.get('format_version')}, "
            f"expected {FORMAT_VERSION}"
        )
    kind = payload.get("kind")
    if kind == "perceptron":
        return PerceptronModel(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=float(payload["bias"]),
            epochs_run=int(payload["epochs_run"]),
            seed=int(payload["seed"]),
        )
    if kind == "forest":
        trees = [
            DecisionTree(
                feature=[int(v) for v in t["feature"]],
                threshold=[float(v) for v in t["threshold"]],
                left=[int(v) for v in t["left"]],
                right=[int(v) for v in t["right"]],
                counts=[(int(c[0]), int(c[1])) for c in t["counts"]],
                leaf_class=[int(v) for v in t["leaf_class"]],
            )
            for t in payload["trees"]
        ]
        return ForestModel(
            trees=trees,
            n_trees=int(payload["n_trees"]),
            max_features=str(payload["max_features"]),
            seed=int(payload["seed"]),
            n_features=int(payload["n_features"]),
            max_depth=payload.get("max_depth"),
        )
    raise LoadError(f"model {path} has unknown kind {kind!r}")


def predict(model: PerceptronModel | ForestModel, x: SparseVector) -> int:
    if isinstance(model, PerceptronModel):
        return predict_perceptron(model, x)
    return predict_forest(model, x)


def decision(model: PerceptronModel | ForestModel, x: SparseVector) -> float:
    if isinstance(model, PerceptronModel):
        return perceptron_decision(model, x)
    return forest_decision(model, x)
