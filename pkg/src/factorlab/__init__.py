"""factorlab: stock-factor regression analysis and model comparison.

A numpy-based toolkit covering the full workflow of a factor study on
quarterly company data: multiple linear regression with complete inference
output, the standard linear-model diagnostics (collinearity, outliers,
heteroscedasticity, residual normality and autocorrelation, per-predictor
linearity), a from-scratch random forest regressor, and a cross-validated
comparison harness with a paired significance test. A CLI (`factorlab`)
drives the whole pipeline and writes a reproducible report directory.
"""

from .crossval import (
    EvalSummary,
    FoldMetrics,
    ForestModelSpec,
    LinearModelSpec,
    fold_assignment,
    kfold_cv,
)
from .data import (
    DEFAULT_SCHEMA,
    PREDICTOR_COLUMNS,
    RESPONSE_COLUMN,
    FactorFrame,
    TransformSpec,
    apply_transform,
    load_csv,
    remove_rows,
    synthesize,
    write_csv,
)
from .diagnostics import (
    AcfResult,
    CorrelationMatrix,
    DiagnosticsReport,
    RvfResult,
    acf,
    component_residual,
    diagnostics_report,
    drop_high_vif,
    flag_outliers,
    pearson_matrix,
    qq_points,
    residual_vs_fitted,
    standardized_residuals,
    studentized_residuals,
    tukey_suggest,
    vif,
)
from .forest import (
    ForestConfig,
    ForestModel,
    RegressionTree,
    feature_importance,
    forest_from_json_dict,
    forest_to_json_dict,
    predict_forest,
    train_forest,
)
from .linalg import LeastSquaresResult, qr_least_squares, xtx_inverse_diagonal
from .metrics import ComparisonResult, mae, paired_t_test, pearson_r, rmse
from .ols import (
    LinearFit,
    ScreenRow,
    coefficient_rows,
    fit_ols,
    predict,
    screen_predictors,
    significance_stars,
)
from .pipeline import PipelineOptions, run_analyze
from .special import (
    f_p_upper,
    normal_quantile,
    regularized_incomplete_beta,
    student_t_p_two_sided,
)
from .version import SPEC_VERSION

__version__ = "0.1.0"

__all__ = [
    "AcfResult",
    "ComparisonResult",
    "CorrelationMatrix",
    "DEFAULT_SCHEMA",
    "DiagnosticsReport",
    "EvalSummary",
    "FactorFrame",
    "FoldMetrics",
    "ForestConfig",
    "ForestModel",
    "ForestModelSpec",
    "LeastSquaresResult",
    "LinearFit",
    "LinearModelSpec",
    "PREDICTOR_COLUMNS",
    "PipelineOptions",
    "RESPONSE_COLUMN",
    "RegressionTree",
    "RvfResult",
    "SPEC_VERSION",
    "ScreenRow",
    "TransformSpec",
    "acf",
    "apply_transform",
    "coefficient_rows",
    "component_residual",
    "diagnostics_report",
    "drop_high_vif",
    "f_p_upper",
    "feature_importance",
    "fit_ols",
    "flag_outliers",
    "fold_assignment",
    "forest_from_json_dict",
    "forest_to_json_dict",
    "kfold_cv",
    "load_csv",
    "mae",
    "normal_quantile",
    "paired_t_test",
    "pearson_matrix",
    "pearson_r",
    "predict",
    "predict_forest",
    "qq_points",
    "qr_least_squares",
    "regularized_incomplete_beta",
    "remove_rows",
    "residual_vs_fitted",
    "rmse",
    "run_analyze",
    "screen_predictors",
    "significance_stars",
    "standardized_residuals",
    "student_t_p_two_sided",
    "studentized_residuals",
    "synthesize",
    "train_forest",
    "tukey_suggest",
    "vif",
    "write_csv",
    "xtx_inverse_diagonal",
]
