"""End-to-end analysis pipeline and the per-subcommand entry points.

The full run mirrors a complete factor study: ingest, per-predictor
screening, correlation matrix, collinearity check (with optional drop),
fit with outlier flags, optional remove-and-refit, the diagnostics bundle,
forest training, cross-validated comparison of both models, and a paired
significance test. Everything lands under one output directory:

    report.json     master document (self-contained, re-renderable)
    report.txt      human-readable rendering
    tables/*.csv    summary tables and plot data
    figures/*.svg   self-contained figures
    model/forest.json  the trained forest

Writes are atomic (temp file then rename) and a fixed seed makes the whole
directory reproducible byte for byte.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .crossval import ForestModelSpec, LinearModelSpec, kfold_cv
from .data import FactorFrame, load_csv, remove_rows, synthesize, write_csv
from .diagnostics import diagnostics_report, drop_high_vif, pearson_matrix, vif
from .diagnostics import flag_outliers
from .errors import ValidationError
from .forest import ForestConfig, feature_importance, forest_to_json_dict, train_forest
from .metrics import paired_t_test
from .ols import fit_ols, screen_predictors
from .report import (
    comparison_to_json,
    diagnostics_to_json,
    document_to_json,
    fit_to_json,
    new_document,
    render_figures,
    render_report_text,
    render_tables,
    summary_to_json,
)


@dataclass(frozen=True)
class PipelineOptions:
    """Everything a pipeline run needs; mirrors the CLI flags."""

    input: str
    out: str
    seed: int = 0
    response: str | None = None
    predictors: tuple[str, ...] | None = None
    k: int = 10
    alpha: float = 0.05
    outlier_threshold: float = 3.0
    vif_threshold: float = 4.0
    trees: int = 500
    min_leaf: int = 5
    drop_collinear: bool = False
    remove_outliers: bool = False


def _atomic_write(path: str, content: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(content)
    os.replace(tmp, path)


class Workspace:
    """Output directory with atomic writers for each artifact family."""

    def __init__(self, out_dir: str):
        self.root = out_dir
        for sub in ("", "tables", "figures", "model"):
            os.makedirs(os.path.join(out_dir, sub), exist_ok=True)

    def write(self, name: str, content: str) -> None:
        _atomic_write(os.path.join(self.root, name), content)

    def write_document(self, doc: dict) -> None:
        self.write("report.json", document_to_json(doc))
        self.write("report.txt", render_report_text(doc))
        for name, content in render_tables(doc).items():
            self.write(os.path.join("tables", name), content)
        for name, content in render_figures(doc).items():
            self.write(os.path.join("figures", name), content)


def _settings(options: PipelineOptions, frame: FactorFrame, predictors) -> dict:
    return {
        "input": options.input,
        "seed": options.seed,
        "response": frame.response_name,
        "predictors": list(predictors),
        "fit_predictors": list(predictors),  # updated if collinear drop runs
        "k": options.k,
        "alpha": options.alpha,
        "outlier_threshold": options.outlier_threshold,
        "vif_threshold": options.vif_threshold,
        "trees": options.trees,
        "min_leaf": options.min_leaf,
        "drop_collinear": options.drop_collinear,
        "remove_outliers": options.remove_outliers,
    }


def _load(options: PipelineOptions):
    kwargs = {}
    if options.response is not None:
        kwargs["response_name"] = options.response
    frame = load_csv(options.input, **kwargs)
    predictors = (
        tuple(options.predictors) if options.predictors else frame.predictor_names
    )
    for name in predictors:
        frame.column_index(name)  # raises UnknownColumn early
    return frame, predictors


def _data_fragment(frame: FactorFrame) -> dict:
    return {
        "rows": frame.n_rows,
        "columns": list(frame.column_names),
        "response": frame.response_name,
    }


def run_analyze(options: PipelineOptions) -> dict:
    """The full pipeline; returns the master document after writing files."""
    frame, predictors = _load(options)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)

    # 1. single-predictor screening
    doc["screen"] = [
        {
            "predictor": row.predictor,
            "f_stat": row.f_stat,
            "r_squared": row.r_squared,
            "rse": row.rse,
        }
        for row in screen_predictors(frame, predictors)
    ]

    # 2. correlation matrix of features and response, masks at alpha and 0.01
    corr_columns = list(predictors) + [frame.response_name]
    levels = sorted({options.alpha, 0.01}, reverse=True)
    base = pearson_matrix(frame, corr_columns, levels[0])
    masks = {f"{levels[0]:g}": base.significant.tolist()}
    for level in levels[1:]:
        masks[f"{level:g}"] = pearson_matrix(
            frame, corr_columns, level
        ).significant.tolist()
    doc["correlation"] = {
        "names": corr_columns,
        "r": base.r.tolist(),
        "masks": masks,
    }

    # 3. collinearity: report all factors, optionally drop the worst offenders
    factors = vif(frame, predictors)
    if options.drop_collinear:
        kept, dropped = drop_high_vif(frame, predictors, options.vif_threshold)
    else:
        kept, dropped = predictors, []
    doc["vif"] = {
        "values": {k: float(v) for k, v in factors.items()},
        "threshold": options.vif_threshold,
        "flagged": sorted(k for k, v in factors.items() if v >= options.vif_threshold),
        "dropped": dropped,
    }
    doc["settings"]["fit_predictors"] = list(kept)

    # 4. fit and outlier flags
    fit = fit_ols(frame, kept)
    outliers = flag_outliers(fit, options.outlier_threshold)
    doc["fit"] = fit_to_json(fit)
    removed = bool(options.remove_outliers and outliers)
    doc["outliers"] = {
        "threshold": options.outlier_threshold,
        "flagged": outliers,
        "removed": removed,
    }

    # 5. optional remove-and-refit; downstream stages use the refit frame
    active_frame, active_fit = frame, fit
    doc["refit"] = None
    if removed:
        active_frame = remove_rows(frame, outliers)
        active_fit = fit_ols(active_frame, kept)
        doc["refit"] = fit_to_json(active_fit)

    # 6. diagnostics bundle
    doc["diagnostics"] = diagnostics_to_json(
        diagnostics_report(
            active_fit,
            active_frame,
            kept,
            outlier_threshold=options.outlier_threshold,
        )
    )

    # 7. forest training
    config = ForestConfig(
        n_trees=options.trees, min_leaf=options.min_leaf, seed=options.seed
    )
    model = train_forest(active_frame, kept, config=config)
    doc["forest"] = {
        "config": forest_to_json_dict(model)["config"],
        "m_try_used": model.m_try_used,
        "importance": feature_importance(model),
    }

    # 8. cross-validated comparison on identical folds
    cv_linear = kfold_cv(active_frame, LinearModelSpec(kept), options.k, options.seed)
    cv_forest = kfold_cv(
        active_frame, ForestModelSpec(kept, config), options.k, options.seed
    )
    doc["cross_validation"] = {
        "k": options.k,
        "seed": options.seed,
        "linear": summary_to_json(cv_linear),
        "forest": summary_to_json(cv_forest),
    }
    comparison = paired_t_test(
        cv_linear.fold_mae,
        cv_forest.fold_mae,
        names=("linear", "forest"),
        alpha=options.alpha,
    )
    doc["comparison"] = comparison_to_json(comparison, options.alpha)

    workspace = Workspace(options.out)
    workspace.write_document(doc)
    workspace.write(
        os.path.join("model", "forest.json"),
        json.dumps(forest_to_json_dict(model), indent=2) + "\n",
    )
    return doc


# --- narrower subcommand runs ---------------------------------------------


def run_synth(seed: int, out_path: str, companies: int, quarters: int,
              noise_sd: float) -> dict:
    frame = synthesize(seed, companies=companies, quarters=quarters,
                       noise_sd=noise_sd)
    write_csv(frame, out_path)
    return {"rows": frame.n_rows, "columns": list(frame.column_names),
            "path": out_path}


def run_ingest(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    return {
        "rows": frame.n_rows,
        "columns": list(frame.column_names),
        "predictors": list(predictors),
        "response": frame.response_name,
        "valid": True,
    }


def run_screen(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)
    doc["screen"] = [
        {
            "predictor": row.predictor,
            "f_stat": row.f_stat,
            "r_squared": row.r_squared,
            "rse": row.rse,
        }
        for row in screen_predictors(frame, predictors)
    ]
    Workspace(options.out).write_document(doc)
    return doc


def run_fit(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)
    fit = fit_ols(frame, predictors)
    doc["fit"] = fit_to_json(fit)
    doc["outliers"] = {
        "threshold": options.outlier_threshold,
        "flagged": flag_outliers(fit, options.outlier_threshold),
        "removed": False,
    }
    Workspace(options.out).write_document(doc)
    return doc


def run_diagnose(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)
    fit = fit_ols(frame, predictors)
    doc["fit"] = fit_to_json(fit)
    outliers = flag_outliers(fit, options.outlier_threshold)
    doc["outliers"] = {
        "threshold": options.outlier_threshold,
        "flagged": outliers,
        "removed": False,
    }
    doc["vif"] = {
        "values": {k: float(v) for k, v in vif(frame, predictors).items()},
        "threshold": options.vif_threshold,
        "flagged": [],
        "dropped": [],
    }
    doc["vif"]["flagged"] = sorted(
        k for k, v in doc["vif"]["values"].items() if v >= options.vif_threshold
    )
    doc["diagnostics"] = diagnostics_to_json(
        diagnostics_report(
            fit, frame, predictors, outlier_threshold=options.outlier_threshold
        )
    )
    Workspace(options.out).write_document(doc)
    return doc


def run_forest(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    config = ForestConfig(
        n_trees=options.trees, min_leaf=options.min_leaf, seed=options.seed
    )
    model = train_forest(frame, predictors, config=config)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)
    doc["forest"] = {
        "config": forest_to_json_dict(model)["config"],
        "m_try_used": model.m_try_used,
        "importance": feature_importance(model),
    }
    workspace = Workspace(options.out)
    workspace.write_document(doc)
    workspace.write(
        os.path.join("model", "forest.json"),
        json.dumps(forest_to_json_dict(model), indent=2) + "\n",
    )
    return doc


def run_evaluate(options: PipelineOptions) -> dict:
    frame, predictors = _load(options)
    doc = new_document(_settings(options, frame, predictors))
    doc["data"] = _data_fragment(frame)
    config = ForestConfig(
        n_trees=options.trees, min_leaf=options.min_leaf, seed=options.seed
    )
    cv_linear = kfold_cv(frame, LinearModelSpec(predictors), options.k, options.seed)
    cv_forest = kfold_cv(
        frame, ForestModelSpec(predictors, config), options.k, options.seed
    )
    doc["cross_validation"] = {
        "k": options.k,
        "seed": options.seed,
        "linear": summary_to_json(cv_linear),
        "forest": summary_to_json(cv_forest),
    }
    comparison = paired_t_test(
        cv_linear.fold_mae,
        cv_forest.fold_mae,
        names=("linear", "forest"),
        alpha=options.alpha,
    )
    doc["comparison"] = comparison_to_json(comparison, options.alpha)
    Workspace(options.out).write_document(doc)
    return doc


def run_report(out_dir: str) -> dict:
    """Re-render report.txt, tables, and figures from a stored report.json."""
    path = os.path.join(out_dir, "report.json")
    if not os.path.exists(path):
        raise ValidationError(f"no report.json under {out_dir!r}")
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    workspace = Workspace(out_dir)
    workspace.write("report.txt", render_report_text(doc))
    for name, content in render_tables(doc).items():
        workspace.write(os.path.join("tables", name), content)
    for name, content in render_figures(doc).items():
        workspace.write(os.path.join("figures", name), content)
    return doc
