"""k-fold cross-validation over factor frames.

Fold assignment is a pure function of (row count, k, seed) - it never looks
at the model - so two models evaluated under the same seed are scored on
identical train/test partitions and their per-fold errors pair up for the
comparison test.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import FactorFrame
from .errors import DimensionMismatch, KTooLarge, ValidationError, ZeroVariance
from .forest import ForestConfig, predict_forest, train_forest
from .metrics import mae, pearson_r, rmse
from .ols import fit_ols, predict
from .rng import stream

#: Philox stream index reserved for the fold shuffle.
FOLD_STREAM = 0


@dataclass(frozen=True)
class LinearModelSpec:
    """Cross-validate an OLS fit on these predictors."""

    predictors: tuple[str, ...]
    name: str = "linear"


@dataclass(frozen=True)
class ForestModelSpec:
    """Cross-validate a random forest on these predictors."""

    predictors: tuple[str, ...]
    config: ForestConfig = ForestConfig()
    name: str = "forest"


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    mae: float
    rmse: float
    r: float | None  # undefined for single-row or constant folds


@dataclass(frozen=True)
class EvalSummary:
    """Pooled out-of-fold metrics plus the per-fold breakdown."""

    model_name: str
    mae: float
    rmse: float
    pearson_r: float
    per_fold: tuple[FoldMetrics, ...]

    @property
    def fold_mae(self) -> np.ndarray:
        return np.array([f.mae for f in self.per_fold])


def fold_assignment(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Deterministic disjoint folds of sizes differing by at most one."""
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if k > n:
        raise KTooLarge(f"k={k} folds need at least that many rows, got {n}")
    perm = stream(seed, FOLD_STREAM).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, k)]


def _subframe(frame: FactorFrame, rows: np.ndarray) -> FactorFrame:
    return replace(frame, values=np.array(frame.values[rows]))


def _train_and_predict(frame, test_frame, spec):
    if isinstance(spec, LinearModelSpec):
        fit = fit_ols(frame, spec.predictors)
        return predict(fit, test_frame.matrix(spec.predictors))
    if isinstance(spec, ForestModelSpec):
        model = train_forest(frame, spec.predictors, config=spec.config)
        return predict_forest(model, test_frame.matrix(spec.predictors))
    raise ValidationError(f"unknown model spec {type(spec).__name__}")


def kfold_cv(frame: FactorFrame, spec, k: int = 10, seed: int = 0) -> EvalSummary:
    """Out-of-fold evaluation of ``spec`` with pooled headline metrics.

    Headline MAE/RMSE/r pool every out-of-fold prediction; the per-fold
    values are also reported (and feed the paired comparison test).
    """
    n = frame.n_rows
    folds = fold_assignment(n, k, seed)
    y = frame.column(frame.response_name)
    pooled = np.empty(n)
    per_fold = []
    for fold_index, test_rows in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[test_rows] = False
        train_frame = _subframe(frame, np.nonzero(mask)[0])
        test_frame = _subframe(frame, test_rows)
        preds = _train_and_predict(train_frame, test_frame, spec)
        pooled[test_rows] = preds
        y_test = y[test_rows]
        try:
            fold_r = pearson_r(y_test, preds)
        except (ZeroVariance, DimensionMismatch):
            fold_r = None  # single-row or constant fold
        per_fold.append(
            FoldMetrics(
                fold=fold_index + 1,
                mae=mae(y_test, preds),
                rmse=rmse(y_test, preds),
                r=fold_r,
            )
        )
    return EvalSummary(
        model_name=spec.name,
        mae=mae(y, pooled),
        rmse=rmse(y, pooled),
        pearson_r=pearson_r(y, pooled),
        per_fold=tuple(per_fold),
    )
