"""Linear-model assumption checks.

The workflow a careful analyst runs after a first fit, made quantitative:

* collinearity via variance inflation factors,
* outliers via externally studentized residuals,
* heteroscedasticity via the |residual|-vs-fitted correlation (the scatter is
  still emitted, since the classic check is visual),
* residual normality via normal Q-Q pairs,
* residual independence via the autocorrelation function with a 1.96/sqrt(n)
  band,
* linearity per predictor via component+residual series and the power
  transform ladder,
* predictor association via the Pearson matrix with a significance mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import FactorFrame, TransformSpec, apply_transform
from .errors import (
    CollinearSingular,
    ConstantPredictor,
    DimensionMismatch,
    InsufficientRows,
    LagTooLarge,
    RankDeficient,
    UnknownColumn,
    ValidationError,
    ZeroVariance,
)
from .metrics import correlation_p_value, pearson_r
from .ols import LinearFit, fit_ols
from .special import normal_quantile

#: VIF at or above this value flags problematic collinearity.
VIF_FLAG_THRESHOLD = 4.0

#: |studentized residual| above this value flags an outlier.
OUTLIER_THRESHOLD = 3.0

_EXACT_FIT_R2 = 1.0 - 1e-12


def vif(frame: FactorFrame, predictors) -> dict[str, float]:
    """Variance inflation factor of each predictor against all the others.

    VIF_j = 1 / (1 - R^2_j) with R^2_j from the auxiliary regression of
    predictor j on the remaining predictors (intercept included). An exact
    linear dependence makes the factor infinite and raises
    ``CollinearSingular`` instead.
    """
    predictors = tuple(predictors)
    if len(predictors) < 2:
        raise ValidationError("variance inflation needs at least two predictors")
    out = {}
    for j, name in enumerate(predictors):
        others = predictors[:j] + predictors[j + 1 :]
        try:
            aux = fit_ols(frame, others, response=name)
        except RankDeficient:
            raise CollinearSingular(name) from None
        r2 = aux.r_squared
        if r2 >= _EXACT_FIT_R2:
            raise CollinearSingular(name)
        out[name] = 1.0 / (1.0 - r2)
    return out


def standardized_residuals(fit: LinearFit) -> np.ndarray:
    """Internally standardized residuals e_i / (rse * sqrt(1 - h_i)).

    Exact-fit rows (rse of 0 or leverage of 1 force the residual to zero)
    standardize to 0 by convention.
    """
    scale = fit.rse * np.sqrt(np.clip(1.0 - fit.leverage, 0.0, 1.0))
    out = np.zeros_like(fit.residuals)
    ok = scale > 0.0
    out[ok] = fit.residuals[ok] / scale[ok]
    return out


def studentized_residuals(fit: LinearFit) -> np.ndarray:
    """Externally studentized residuals (leave-one-out error scale)."""
    if fit.df_resid < 2:
        raise InsufficientRows("studentization needs at least 2 residual df")
    r = standardized_residuals(fit)
    df = fit.df_resid
    inner = (df - 1.0) / np.maximum(df - r * r, 1e-300)
    return r * np.sqrt(np.maximum(inner, 0.0))


def flag_outliers(fit: LinearFit, threshold: float = OUTLIER_THRESHOLD) -> list[int]:
    """1-based indices of rows whose |studentized residual| exceeds the cut."""
    t = studentized_residuals(fit)
    return [int(i) + 1 for i in np.nonzero(np.abs(t) > threshold)[0]]


@dataclass(frozen=True)
class AcfResult:
    """Autocorrelations by lag plus the white-noise confidence band."""

    points: list[tuple[int, float]]
    band: float


def acf(series, max_lag: int | None = None) -> AcfResult:
    """Sample autocorrelation function of a series.

    acf(k) = sum (x_t - xbar)(x_{t+k} - xbar) / sum (x_t - xbar)^2, with the
    conventional band 1.96 / sqrt(n). Lag 0 is exactly 1.
    """
    x = np.asarray(series, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise DimensionMismatch("autocorrelation needs at least two points")
    if max_lag is None:
        max_lag = min(20, n - 1)
    if max_lag >= n:
        raise LagTooLarge(f"max_lag {max_lag} must be smaller than n={n}")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise ZeroVariance("autocorrelation is undefined for a constant series")
    points = [(0, 1.0)]
    for k in range(1, max_lag + 1):
        points.append((k, float(xc[:-k] @ xc[k:]) / denom))
    return AcfResult(points=points, band=1.96 / np.sqrt(n))


def qq_points(fit: LinearFit) -> list[tuple[float, float]]:
    """Normal Q-Q pairs (theoretical quantile, sorted standardized residual).

    Plotting positions are (i - 0.5)/n for i = 1..n.
    """
    sample = np.sort(standardized_residuals(fit))
    n = sample.shape[0]
    return [
        (normal_quantile((i + 0.5) / n), float(sample[i])) for i in range(n)
    ]


@dataclass(frozen=True)
class RvfResult:
    """Residual-vs-fitted scatter plus a funnel-shape indicator.

    The indicator is the Pearson correlation between |residual| and fitted
    value with its two-sided p-value; a small p-value is evidence of
    heteroscedasticity. All-zero residuals make the correlation undefined,
    reported as 0 with p = 1.
    """

    points: list[tuple[float, float]]
    correlation: float
    p_value: float


def residual_vs_fitted(fit: LinearFit) -> RvfResult:
    points = [
        (float(f), float(e)) for f, e in zip(fit.fitted, fit.residuals)
    ]
    abs_resid = np.abs(fit.residuals)
    # Residuals at rounding-error level (an exact fit) carry no variance
    # information; report the documented degenerate convention.
    scale = max(1.0, float(np.abs(fit.fitted).max(initial=0.0)))
    if abs_resid.max(initial=0.0) <= 1e-12 * scale:
        return RvfResult(points=points, correlation=0.0, p_value=1.0)
    try:
        r = pearson_r(abs_resid, fit.fitted)
    except ZeroVariance:
        return RvfResult(points=points, correlation=0.0, p_value=1.0)
    return RvfResult(
        points=points,
        correlation=r,
        p_value=correlation_p_value(r, fit.n_obs),
    )


def component_residual(
    fit: LinearFit, frame: FactorFrame, predictor: str
) -> list[tuple[float, float]]:
    """Component+residual pairs (x_ij, e_i + beta_j x_ij), ordered by x."""
    if predictor not in fit.predictor_names:
        raise UnknownColumn(predictor)
    beta_j = fit.beta[fit.predictor_names.index(predictor)]
    x = frame.column(predictor)
    partial = fit.residuals + beta_j * x
    order = np.argsort(x, kind="stable")
    return [(float(x[i]), float(partial[i])) for i in order]


def tukey_suggest(
    frame: FactorFrame, predictor: str, response: str | None = None
) -> TransformSpec:
    """Pick the power-ladder transform maximizing simple-regression R^2.

    Candidates are identity, log, sqrt, square; log and sqrt are skipped when
    the column leaves their domain. Ties keep the identity.
    """
    col = frame.column(predictor)
    if np.ptp(col) == 0.0:
        raise ConstantPredictor(predictor)
    candidates = ["identity"]
    if np.all(col > 0):
        candidates.append("log")
    if np.all(col >= 0):
        candidates.append("sqrt")
    candidates.append("square")

    best_spec = TransformSpec(predictor, "identity")
    best_r2 = -np.inf
    for kind in candidates:
        spec = TransformSpec(predictor, kind)
        transformed = apply_transform(frame, spec)
        if np.ptp(transformed.column(predictor)) == 0.0:
            continue  # e.g. squaring a +-c column
        fit = fit_ols(transformed, [predictor], response)
        if fit.r_squared > best_r2:  # strict: ties keep the earlier candidate
            best_r2 = fit.r_squared
            best_spec = spec
    return best_spec


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pairwise Pearson correlations with a significance mask at ``alpha``."""

    names: tuple[str, ...]
    r: np.ndarray
    significant: np.ndarray
    alpha: float


def pearson_matrix(frame: FactorFrame, columns, alpha: float = 0.05) -> CorrelationMatrix:
    """Correlation matrix over ``columns`` with a two-sided significance mask."""
    columns = tuple(columns)
    if len(columns) < 2:
        raise ValidationError("a correlation matrix needs at least two columns")
    series = [frame.column(name) for name in columns]
    for name, s in zip(columns, series):
        if np.ptp(s) == 0.0:
            raise ZeroVariance(f"column {name!r} is constant")
    m = len(columns)
    n = frame.n_rows
    r = np.eye(m)
    significant = np.eye(m, dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            rij = pearson_r(series[i], series[j])
            r[i, j] = r[j, i] = rij
            sig = correlation_p_value(rij, n) < alpha
            significant[i, j] = significant[j, i] = sig
    return CorrelationMatrix(names=columns, r=r, significant=significant, alpha=alpha)


@dataclass(frozen=True)
class DiagnosticsReport:
    """The full assumption-check bundle for one fitted model."""

    vif: dict[str, float]
    outlier_indices: list[int]  # 1-based
    studentized: np.ndarray
    leverage: np.ndarray
    rvf: list[tuple[float, float]]
    het_correlation: float
    het_p_value: float
    qq: list[tuple[float, float]]
    acf: list[tuple[int, float]]
    acf_band: float
    crplots: dict[str, list[tuple[float, float]]]
    outlier_threshold: float


def diagnostics_report(
    fit: LinearFit,
    frame: FactorFrame,
    predictors=None,
    *,
    outlier_threshold: float = OUTLIER_THRESHOLD,
    max_lag: int | None = None,
) -> DiagnosticsReport:
    """Run every per-model diagnostic and bundle the series for reporting."""
    if predictors is None:
        predictors = tuple(
            name for name in fit.predictor_names if name != "intercept"
        )
    predictors = tuple(predictors)
    vif_values = vif(frame, predictors) if len(predictors) >= 2 else {}
    rvf = residual_vs_fitted(fit)
    acf_result = acf(fit.residuals, max_lag)
    return DiagnosticsReport(
        vif=vif_values,
        outlier_indices=flag_outliers(fit, outlier_threshold),
        studentized=studentized_residuals(fit),
        leverage=fit.leverage.copy(),
        rvf=rvf.points,
        het_correlation=rvf.correlation,
        het_p_value=rvf.p_value,
        qq=qq_points(fit),
        acf=acf_result.points,
        acf_band=acf_result.band,
        crplots={
            name: component_residual(fit, frame, name) for name in predictors
        },
        outlier_threshold=outlier_threshold,
    )


def report_to_json_dict(report: DiagnosticsReport) -> dict:
    """Serialize a diagnostics bundle to a JSON-ready dictionary."""
    return {
        "vif": {k: float(v) for k, v in report.vif.items()},
        "vif_threshold": VIF_FLAG_THRESHOLD,
        "vif_flagged": sorted(
            k for k, v in report.vif.items() if v >= VIF_FLAG_THRESHOLD
        ),
        "outlier_threshold": report.outlier_threshold,
        "outlier_indices": list(report.outlier_indices),
        "studentized": [float(v) for v in report.studentized],
        "leverage": [float(v) for v in report.leverage],
        "residual_vs_fitted": [[f, e] for f, e in report.rvf],
        "heteroscedasticity": {
            "correlation": report.het_correlation,
            "p_value": report.het_p_value,
        },
        "qq": [[t, s] for t, s in report.qq],
        "acf": [[int(k), float(v)] for k, v in report.acf],
        "acf_band": float(report.acf_band),
        "component_residual": {
            name: [[x, pr] for x, pr in series]
            for name, series in report.crplots.items()
        },
    }


def drop_high_vif(
    frame: FactorFrame, predictors, threshold: float = VIF_FLAG_THRESHOLD
) -> tuple[tuple[str, ...], list[str]]:
    """Iteratively drop the highest-VIF predictor until all are below cut.

    Mirrors the manual workflow of removing one collinear fundamental at a
    time and re-checking. Returns (kept, dropped-in-order).
    """
    kept = list(predictors)
    dropped = []
    while len(kept) >= 2:
        factors = vif(frame, kept)
        worst = max(kept, key=lambda name: factors[name])
        if factors[worst] < threshold:
            break
        kept.remove(worst)
        dropped.append(worst)
    return tuple(kept), dropped
