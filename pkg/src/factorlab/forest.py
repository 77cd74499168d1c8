"""Random forest regression, built from scratch.

Each tree is grown on a bootstrap resample; at every node a random subset of
``m_try`` features is drawn (default round(sqrt(p))) and the split minimizing
the summed child squared error is taken. Ties break toward the lower feature
index, then the lower threshold, so a tree is a pure function of its inputs
and its seed.

Determinism is the core contract here. Tree ``i`` draws all of its
randomness from the Philox stream keyed ``(config.seed, i)``, consumed in
preorder (node, left subtree, right subtree). Trees therefore never interact:
training with more threads, or growing a larger forest with the same seed,
reproduces every previously trained tree bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import FactorFrame
from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    InsufficientRows,
    ValidationError,
)
from .linalg import as_matrix
from .rng import stream
from .version import SPEC_VERSION

FOREST_FORMAT = "factorlab.forest"


@dataclass(frozen=True)
class ForestConfig:
    """Training configuration; ``m_try=None`` means round(sqrt(p))."""

    n_trees: int = 500
    m_try: int | None = None
    min_leaf: int = 5
    max_depth: int | None = None
    seed: int = 0
    bootstrap: bool = True

    def validate(self, n_features: int) -> int:
        """Check invariants and return the resolved m_try."""
        if self.n_trees < 1:
            raise ConfigInvalid(f"n_trees must be >= 1, got {self.n_trees}")
        if self.min_leaf < 1:
            raise ConfigInvalid(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigInvalid(f"max_depth must be >= 0, got {self.max_depth}")
        m_try = self.m_try
        if m_try is None:
            m_try = max(1, round(math.sqrt(n_features)))
        if not (1 <= m_try <= n_features):
            raise ConfigInvalid(
                f"m_try must lie in 1..{n_features}, got {m_try}"
            )
        return m_try


@dataclass(frozen=True)
class RegressionTree:
    """Flattened tree: ``feature < 0`` marks a leaf.

    ``value`` is the mean training response of a leaf, ``count`` the number
    of training rows that reached the node, ``gain`` the squared-error
    reduction of an internal node's split (0 at leaves).
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    count: np.ndarray
    gain: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    def predict(self, x: np.ndarray) -> np.ndarray:
        node = np.zeros(x.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not active.any():
                return self.value[node]
            idx = np.nonzero(active)[0]
            nd = node[idx]
            go_left = x[idx, self.feature[nd]] <= self.threshold[nd]
            node[idx] = np.where(go_left, self.left[nd], self.right[nd])


@dataclass(frozen=True)
class ForestModel:
    """An immutable trained ensemble."""

    trees: tuple[RegressionTree, ...]
    config: ForestConfig
    m_try_used: int
    feature_names: tuple[str, ...]


def _best_split(x: np.ndarray, y: np.ndarray, features, min_leaf: int):
    """Best (sse, feature, threshold) over candidate features, or None.

    Candidate thresholds are midpoints between consecutive sorted unique
    values; only splits leaving both children at least ``min_leaf`` rows
    qualify. Strict comparisons make ties resolve to the lowest feature
    index and then the lowest threshold.
    """
    n = y.shape[0]
    best = None
    best_sse = np.inf
    for f in sorted(int(f) for f in features):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        ys = y[order]
        sizes_l = np.arange(1, n)
        valid = (xs[:-1] < xs[1:]) & (sizes_l >= min_leaf) & (n - sizes_l >= min_leaf)
        if not valid.any():
            continue
        cs = np.cumsum(ys)
        cs2 = np.cumsum(ys * ys)
        sum_l = cs[:-1]
        sse_l = cs2[:-1] - sum_l * sum_l / sizes_l
        sizes_r = n - sizes_l
        sum_r = cs[-1] - sum_l
        sse_r = (cs2[-1] - cs2[:-1]) - sum_r * sum_r / sizes_r
        sse = sse_l + sse_r
        sse[~valid] = np.inf
        pos = int(np.argmin(sse))  # first minimum = lowest threshold
        if sse[pos] < best_sse:
            best_sse = float(sse[pos])
            best = (best_sse, f, float(0.5 * (xs[pos] + xs[pos + 1])))
    return best


def _grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    *,
    m_try: int,
    min_leaf: int,
    max_depth: int | None,
    bootstrap: bool,
) -> RegressionTree:
    n, p = x.shape
    if bootstrap:
        rows = rng.integers(0, n, size=n)
    else:
        rows = np.arange(n)
    xb = x[rows]
    yb = y[rows]

    feature, threshold, left, right = [], [], [], []
    value, count, gain = [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        count.append(0)
        gain.append(0.0)
        return len(feature) - 1

    # Explicit preorder stack; pushing the right child first keeps the rng
    # consumption order identical to a recursive implementation.
    root = new_node()
    stack = [(np.arange(n), 0, root)]
    while stack:
        idx, depth, node = stack.pop()
        y_node = yb[idx]
        value[node] = float(y_node.mean())
        count[node] = int(idx.shape[0])

        at_depth = max_depth is not None and depth >= max_depth
        too_small = idx.shape[0] < 2 * min_leaf
        if at_depth or too_small or np.ptp(y_node) == 0.0:
            continue

        candidates = rng.choice(p, size=m_try, replace=False)
        split = _best_split(xb[idx], y_node, candidates, min_leaf)
        if split is None:
            continue
        sse, f, thr = split
        mean = y_node.mean()
        parent_sse = float(((y_node - mean) ** 2).sum())
        feature[node] = f
        threshold[node] = thr
        gain[node] = max(parent_sse - sse, 0.0)
        go_left = xb[idx, f] <= thr
        left_id = new_node()
        right_id = new_node()
        left[node] = left_id
        right[node] = right_id
        stack.append((idx[~go_left], depth + 1, right_id))
        stack.append((idx[go_left], depth + 1, left_id))

    return RegressionTree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=float),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value, dtype=float),
        count=np.asarray(count, dtype=np.int64),
        gain=np.asarray(gain, dtype=float),
    )


def train_forest(
    frame: FactorFrame,
    predictors=None,
    response: str | None = None,
    config: ForestConfig = ForestConfig(),
    *,
    n_threads: int = 1,
) -> ForestModel:
    """Train a forest on ``frame``; the result depends only on data and seed."""
    if predictors is None:
        predictors = frame.predictor_names
    predictors = tuple(predictors)
    if response is None:
        response = frame.response_name
    x = frame.matrix(predictors)
    y = frame.column(response)
    if frame.n_rows < 2:
        raise InsufficientRows("forest training needs at least 2 rows")
    m_try = config.validate(len(predictors))

    def build(i: int) -> RegressionTree:
        return _grow_tree(
            x,
            y,
            stream(config.seed, i),
            m_try=m_try,
            min_leaf=config.min_leaf,
            max_depth=config.max_depth,
            bootstrap=config.bootstrap,
        )

    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            trees = tuple(pool.map(build, range(config.n_trees)))
    else:
        trees = tuple(build(i) for i in range(config.n_trees))
    return ForestModel(
        trees=trees, config=config, m_try_used=m_try, feature_names=predictors
    )


def predict_forest(model: ForestModel, rows) -> np.ndarray:
    """Mean of the per-tree predictions for each row."""
    x = as_matrix(rows, "prediction rows")
    if x.shape[1] != len(model.feature_names):
        raise DimensionMismatch(
            f"model expects {len(model.feature_names)} feature columns, "
            f"got {x.shape[1]}"
        )
    total = np.zeros(x.shape[0])
    for tree in model.trees:
        total += tree.predict(x)
    return total / len(model.trees)


def feature_importance(model: ForestModel) -> dict[str, float]:
    """Split-gain importance per feature, normalized to sum to 1.

    A forest of stumps has no splits and reports all zeros.
    """
    totals = np.zeros(len(model.feature_names))
    for tree in model.trees:
        internal = tree.feature >= 0
        np.add.at(totals, tree.feature[internal], tree.gain[internal])
    grand = totals.sum()
    if grand > 0:
        totals = totals / grand
    return {name: float(v) for name, v in zip(model.feature_names, totals)}


# --- serialization -------------------------------------------------------


def forest_to_json_dict(model: ForestModel) -> dict:
    """Versioned JSON document: config plus flattened node arrays."""
    return {
        "spec_version": SPEC_VERSION,
        "format": FOREST_FORMAT,
        "config": {
            "n_trees": model.config.n_trees,
            "m_try": model.config.m_try,
            "min_leaf": model.config.min_leaf,
            "max_depth": model.config.max_depth,
            "seed": model.config.seed,
            "bootstrap": model.config.bootstrap,
        },
        "m_try_used": model.m_try_used,
        "feature_names": list(model.feature_names),
        "trees": [
            {
                "feature": [int(v) for v in t.feature],
                "threshold": [float(v) for v in t.threshold],
                "left": [int(v) for v in t.left],
                "right": [int(v) for v in t.right],
                "value": [float(v) for v in t.value],
                "count": [int(v) for v in t.count],
                "gain": [float(v) for v in t.gain],
            }
            for t in model.trees
        ],
    }


def forest_from_json_dict(doc: dict) -> ForestModel:
    """Rebuild a model serialized by :func:`forest_to_json_dict`."""
    if doc.get("format") != FOREST_FORMAT:
        raise ValidationError(
            f"not a serialized forest document: format={doc.get('format')!r}"
        )
    cfg = doc["config"]
    config = ForestConfig(
        n_trees=cfg["n_trees"],
        m_try=cfg["m_try"],
        min_leaf=cfg["min_leaf"],
        max_depth=cfg["max_depth"],
        seed=cfg["seed"],
        bootstrap=cfg["bootstrap"],
    )
    trees = tuple(
        RegressionTree(
            feature=np.asarray(t["feature"], dtype=np.int64),
            threshold=np.asarray(t["threshold"], dtype=float),
            left=np.asarray(t["left"], dtype=np.int64),
            right=np.asarray(t["right"], dtype=np.int64),
            value=np.asarray(t["value"], dtype=float),
            count=np.asarray(t["count"], dtype=np.int64),
            gain=np.asarray(t["gain"], dtype=float),
        )
        for t in doc["trees"]
    )
    return ForestModel(
        trees=trees,
        config=config,
        m_try_used=int(doc["m_try_used"]),
        feature_names=tuple(doc["feature_names"]),
    )
