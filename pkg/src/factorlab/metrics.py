"""Error metrics and the paired model-comparison test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, ZeroVariance
from .linalg import as_vector
from .special import student_t_p_two_sided


def _paired(actual, predicted):
    a = as_vector(actual, "actual")
    b = as_vector(predicted, "predicted")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"length mismatch: {a.shape[0]} actual vs {b.shape[0]} predicted"
        )
    if a.shape[0] == 0:
        raise EmptyInput("metrics need at least one observation")
    return a, b


def mae(actual, predicted) -> float:
    """Mean absolute error (1/n) sum |y_j - yhat_j|."""
    a, b = _paired(actual, predicted)
    return float(np.mean(np.abs(a - b)))


def rmse(actual, predicted) -> float:
    """Root mean square error sqrt((1/n) sum (y_j - yhat_j)^2)."""
    a, b = _paired(actual, predicted)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def pearson_r(a, b) -> float:
    """Sample Pearson correlation of two equal-length series."""
    x, y = _paired(a, b)
    if x.shape[0] < 2:
        raise DimensionMismatch("correlation needs at least two observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(xc @ xc)
    sy = float(yc @ yc)
    if sx == 0.0 or sy == 0.0:
        raise ZeroVariance("correlation is undefined for a constant series")
    r = float((xc @ yc) / np.sqrt(sx * sy))
    return min(max(r, -1.0), 1.0)


def correlation_p_value(r: float, n: int) -> float:
    """Two-sided p-value for a sample correlation via the t transform."""
    if n < 3:
        return 1.0
    if abs(r) >= 1.0:
        return 0.0
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    return student_t_p_two_sided(float(t), n - 2)


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome of a paired t-test between two models' error vectors."""

    t_stat: float
    p_value: float
    df: int
    winner: str
    mean_difference: float  # mean(errors_a - errors_b)


def paired_t_test(
    errors_a,
    errors_b,
    *,
    names: tuple[str, str] = ("a", "b"),
    alpha: float = 0.05,
) -> ComparisonResult:
    """Paired t-test on matched error vectors.

    ``winner`` is the lower-mean-error model when the test is significant at
    ``alpha``, else "tie". Zero-variance differences cannot be tested; by
    convention they yield p = 1 when the means agree (identical models) and
    p = 0 when they do not (one model uniformly better).
    """
    a, b = _paired(errors_a, errors_b)
    n = a.shape[0]
    if n < 2:
        raise DimensionMismatch("paired test needs at least two pairs")
    d = a - b
    mean_d = float(d.mean())
    sd = float(d.std(ddof=1))
    df = n - 1
    if sd == 0.0:
        if mean_d == 0.0:
            return ComparisonResult(0.0, 1.0, df, "tie", 0.0)
        t = float("inf") if mean_d > 0 else float("-inf")
        winner = names[1] if mean_d > 0 else names[0]
        return ComparisonResult(t, 0.0, df, winner, mean_d)
    t = mean_d / (sd / np.sqrt(n))
    p = student_t_p_two_sided(float(t), df)
    if p < alpha:
        winner = names[1] if mean_d > 0 else names[0]
    else:
        winner = "tie"
    return ComparisonResult(float(t), p, df, winner, mean_d)
