"""Ordinary least squares with full inference output and predictor screening.

``fit_ols`` produces everything a coefficient table needs: estimates,
standard errors, t statistics, two-sided p-values, R^2, residual standard
error, the overall F test, and per-row leverage. ``screen_predictors`` runs
one simple regression per predictor and reports the per-predictor F, R^2,
and RSE used for first-pass variable screening.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import FactorFrame
from .errors import (
    ConstantPredictor,
    DimensionMismatch,
    InsufficientRows,
    RankDeficient,
)
from .linalg import as_matrix, qr_least_squares, xtx_inverse_diagonal
from .special import f_p_upper, student_t_p_two_sided

INTERCEPT_NAME = "intercept"


@dataclass(frozen=True)
class LinearFit:
    """A fitted least-squares model with its inference statistics."""

    predictor_names: tuple[str, ...]  # intercept first when present
    beta: np.ndarray
    se: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    r_squared: float
    adj_r_squared: float
    rse: float
    f_stat: float
    f_p_value: float
    df_model: int
    df_resid: int
    residuals: np.ndarray
    fitted: np.ndarray
    leverage: np.ndarray
    response_name: str
    intercept: bool

    @property
    def n_obs(self) -> int:
        return self.residuals.shape[0]


def significance_stars(p: float) -> str:
    """Star code for a p-value: **** <0.001, *** <0.01, ** <0.05, * <0.1."""
    if p < 0.001:
        return "****"
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def coefficient_rows(fit: LinearFit) -> list[dict]:
    """Coefficient table as JSON-ready rows."""
    rows = []
    for i, name in enumerate(fit.predictor_names):
        p = float(fit.p_values[i])
        rows.append(
            {
                "name": name,
                "estimate": float(fit.beta[i]),
                "std_error": float(fit.se[i]),
                "t_value": float(fit.t_values[i]),
                "p_value": p,
                "stars": significance_stars(p),
            }
        )
    return rows


def _design(frame: FactorFrame, predictors, intercept: bool):
    xcols = frame.matrix(predictors)
    if intercept:
        return np.column_stack([np.ones(frame.n_rows), xcols])
    return xcols


def fit_ols(
    frame: FactorFrame,
    predictors=None,
    response: str | None = None,
    *,
    intercept: bool = True,
) -> LinearFit:
    """Fit ``response ~ predictors`` by QR least squares.

    ``predictors`` defaults to every non-response column of the frame; the
    intercept is always included unless explicitly suppressed.
    """
    if predictors is None:
        predictors = frame.predictor_names
    predictors = tuple(predictors)
    if response is None:
        response = frame.response_name
    y = frame.column(response)
    n = frame.n_rows
    p = len(predictors)
    df_resid = n - p - (1 if intercept else 0)
    if df_resid < 1:
        raise InsufficientRows(
            f"{n} rows cannot support {p} predictors"
            + (" plus an intercept" if intercept else "")
        )

    x = _design(frame, predictors, intercept)
    try:
        solution = qr_least_squares(x, y)
    except RankDeficient as exc:
        j = exc.column
        if intercept:
            name = INTERCEPT_NAME if j == 0 else predictors[j - 1]
        else:
            name = predictors[j]
        raise RankDeficient(name) from None

    beta = solution.beta
    fitted = x @ beta
    residuals = y - fitted
    rss = float(residuals @ residuals)
    if intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    r_squared = 1.0 - rss / tss if tss > 0.0 else 0.0
    r_squared = min(max(r_squared, 0.0), 1.0)
    adj_r_squared = (
        1.0 - (1.0 - r_squared) * (n - (1 if intercept else 0)) / df_resid
    )
    rse = float(np.sqrt(rss / df_resid))

    se = rse * np.sqrt(xtx_inverse_diagonal(solution.r_factor))
    t_values = np.zeros_like(beta)
    p_values = np.ones_like(beta)
    for i in range(beta.shape[0]):
        if se[i] > 0.0:
            t_values[i] = beta[i] / se[i]
            p_values[i] = student_t_p_two_sided(t_values[i], df_resid)
        elif beta[i] != 0.0:
            # Perfect fit: the estimate is exact, the tail probability is 0.
            t_values[i] = np.inf if beta[i] > 0 else -np.inf
            p_values[i] = 0.0

    df_model = p
    if df_model >= 1 and r_squared < 1.0:
        f_stat = (r_squared / df_model) / ((1.0 - r_squared) / df_resid)
        f_p_value = f_p_upper(f_stat, df_model, df_resid)
    elif df_model >= 1:
        f_stat = float("inf")
        f_p_value = 0.0
    else:
        f_stat = 0.0
        f_p_value = 1.0

    names = ((INTERCEPT_NAME,) if intercept else ()) + predictors
    return LinearFit(
        predictor_names=names,
        beta=beta,
        se=se,
        t_values=t_values,
        p_values=p_values,
        r_squared=r_squared,
        adj_r_squared=adj_r_squared,
        rse=rse,
        f_stat=f_stat,
        f_p_value=f_p_value,
        df_model=df_model,
        df_resid=df_resid,
        residuals=residuals,
        fitted=fitted,
        leverage=solution.leverage,
        response_name=response,
        intercept=intercept,
    )


@dataclass(frozen=True)
class ScreenRow:
    """One simple-regression screening result."""

    predictor: str
    f_stat: float
    r_squared: float
    rse: float


def screen_predictors(
    frame: FactorFrame, predictors=None, response: str | None = None
) -> list[ScreenRow]:
    """Simple regression of the response on each predictor separately.

    Output rows preserve the order of ``predictors``. A constant predictor is
    an error: a silent zero-F row would corrupt the screening table.
    """
    if predictors is None:
        predictors = frame.predictor_names
    rows = []
    for name in predictors:
        if np.ptp(frame.column(name)) == 0.0:
            raise ConstantPredictor(name)
        fit = fit_ols(frame, [name], response)
        rows.append(
            ScreenRow(
                predictor=name,
                f_stat=fit.f_stat,
                r_squared=fit.r_squared,
                rse=fit.rse,
            )
        )
    return rows


def predict(fit: LinearFit, new_rows) -> np.ndarray:
    """Apply a fitted model to new predictor rows (columns in fit order)."""
    x = as_matrix(new_rows, "prediction rows")
    expected = len(fit.predictor_names) - (1 if fit.intercept else 0)
    if x.shape[1] != expected:
        raise DimensionMismatch(
            f"model expects {expected} predictor columns, got {x.shape[1]}"
        )
    if fit.intercept:
        return fit.beta[0] + x @ fit.beta[1:]
    return x @ fit.beta
