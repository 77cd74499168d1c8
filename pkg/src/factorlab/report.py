"""Report document assembly and rendering.

``report.json`` is the master document: every table and figure the pipeline
emits can be re-rendered from it alone (the ``report`` subcommand does
exactly that). Rendering is deterministic, so identical documents produce
byte-identical text, CSV, and SVG output.
"""

from __future__ import annotations

import json
import math

from . import svgplot
from .crossval import EvalSummary
from .diagnostics import DiagnosticsReport, report_to_json_dict
from .metrics import ComparisonResult
from .ols import LinearFit, coefficient_rows, significance_stars
from .version import SPEC_VERSION


def _clean(value):
    """JSON cannot carry NaN/Inf; map them to None recursively."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def document_to_json(doc: dict) -> str:
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


# --- JSON fragments ------------------------------------------------------


def fit_to_json(fit: LinearFit) -> dict:
    return {
        "response": fit.response_name,
        "n_obs": fit.n_obs,
        "coefficients": coefficient_rows(fit),
        "r_squared": fit.r_squared,
        "adj_r_squared": fit.adj_r_squared,
        "rse": fit.rse,
        "f_stat": fit.f_stat,
        "f_p_value": fit.f_p_value,
        "df_model": fit.df_model,
        "df_resid": fit.df_resid,
    }


def summary_to_json(summary: EvalSummary) -> dict:
    return {
        "model": summary.model_name,
        "mae": summary.mae,
        "rmse": summary.rmse,
        "pearson_r": summary.pearson_r,
        "pearson_r_squared": summary.pearson_r**2,
        "per_fold": [
            {"fold": f.fold, "mae": f.mae, "rmse": f.rmse, "r": f.r}
            for f in summary.per_fold
        ],
    }


def comparison_to_json(result: ComparisonResult, alpha: float) -> dict:
    return {
        "pairing": "per-fold mean absolute error",
        "t_stat": result.t_stat,
        "p_value": result.p_value,
        "df": result.df,
        "mean_difference": result.mean_difference,
        "alpha": alpha,
        "significant": result.p_value < alpha,
        "winner": result.winner,
    }


def diagnostics_to_json(report: DiagnosticsReport) -> dict:
    return report_to_json_dict(report)


# --- text rendering ------------------------------------------------------


def _num(v, digits=6) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{digits}g}"
    return str(v)


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[_num(c) if not isinstance(c, str) else c for c in row] for row in rows]
    widths = [
        max(len(headers[j]), *(len(r[j]) for r in cells)) if cells else len(headers[j])
        for j in range(len(headers))
    ]
    def fmt(row):
        return "  ".join(c.ljust(w) if j == 0 else c.rjust(w)
                         for j, (c, w) in enumerate(zip(row, widths)))
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines += [fmt(r) for r in cells]
    return "\n".join(lines)


def render_report_text(doc: dict) -> str:
    """Human-readable rendering of a full analysis document."""
    s = doc["settings"]
    out = []
    push = out.append
    push("factor analysis report")
    push("=" * 70)
    push(f"input: {s['input']}   seed: {s['seed']}   rows: {doc['data']['rows']}")
    push(
        f"response: {s['response']}   alpha: {s['alpha']}   k: {s['k']}   "
        f"outlier threshold: {s['outlier_threshold']}   "
        f"vif threshold: {s['vif_threshold']}"
    )
    push("")

    if "screen" in doc:
        push("single-predictor screening")
        push("-" * 70)
        push(
            _table(
                ["Predictor", "F-stat", "R^2", "RSE"],
                [[r["predictor"], r["f_stat"], r["r_squared"], r["rse"]]
                 for r in doc["screen"]],
            )
        )
        push("")

    if "correlation" in doc:
        corr = doc["correlation"]
        names = corr["names"]
        push("pearson correlation of the features")
        push("-" * 70)
        push(_table([""] + list(names),
                    [[names[i]] + list(row) for i, row in enumerate(corr["r"])]))
        for level, mask in corr["masks"].items():
            weak = [
                f"{names[i]}/{names[j]}"
                for i in range(len(names))
                for j in range(i + 1, len(names))
                if not mask[i][j]
            ]
            push(f"not significant at {level}: {', '.join(weak) if weak else 'none'}")
        push("")

    if "vif" in doc:
        v = doc["vif"]
        push("variance inflation factors")
        push("-" * 70)
        push(_table(["Predictor", "VIF", "Flag"],
                    [[name, value, "high" if value >= v["threshold"] else ""]
                     for name, value in v["values"].items()]))
        if v["dropped"]:
            push(f"dropped as collinear: {', '.join(v['dropped'])}")
        push("")

    for key, label in (("fit", "linear model"), ("refit", "linear model after outlier removal")):
        if key in doc and doc[key]:
            f = doc[key]
            push(f"{label} ({f['response']} ~ {' + '.join(s['fit_predictors'])})")
            push("-" * 70)
            push(
                _table(
                    ["Predictors", "Estimate", "Std. Error", "t value", "Pr(>|t|)", ""],
                    [
                        [
                            "(Intercept)" if row["name"] == "intercept" else row["name"],
                            row["estimate"],
                            row["std_error"],
                            row["t_value"],
                            row["p_value"],
                            row["stars"],
                        ]
                        for row in f["coefficients"]
                    ],
                )
            )
            push("stars: **** p<0.001, *** p<0.01, ** p<0.05, * p<0.1")
            push(
                f"R^2: {_num(f['r_squared'])}   adjusted R^2: {_num(f['adj_r_squared'])}   "
                f"RSE: {_num(f['rse'])}"
            )
            push(
                f"F-statistic: {_num(f['f_stat'])} on {f['df_model']} and "
                f"{f['df_resid']} degrees of freedom, p-value: {_num(f['f_p_value'])}"
            )
            push("")

    if "outliers" in doc:
        o = doc["outliers"]
        listed = ", ".join(str(i) for i in o["flagged"]) if o["flagged"] else "none"
        push(f"outliers (|studentized residual| > {o['threshold']}): {listed}")
        push(f"removed before refit: {'yes' if o['removed'] else 'no'}")
        push("")

    if "diagnostics" in doc:
        d = doc["diagnostics"]
        het = d["heteroscedasticity"]
        push("diagnostics")
        push("-" * 70)
        push(
            f"heteroscedasticity indicator: corr(|residual|, fitted) = "
            f"{_num(het['correlation'])}, p = {_num(het['p_value'])}"
        )
        band = d["acf_band"]
        outside = [k for k, v in d["acf"][1:] if abs(v) > band]
        push(
            f"residual autocorrelation: band +-{_num(band)}, lags outside band: "
            f"{outside if outside else 'none'}"
        )
        push("")

    if "forest" in doc:
        fo = doc["forest"]
        push("random forest")
        push("-" * 70)
        cfg = fo["config"]
        push(
            f"trees: {cfg['n_trees']}   m_try: {fo['m_try_used']}   "
            f"min_leaf: {cfg['min_leaf']}   seed: {cfg['seed']}"
        )
        push(_table(["Feature", "Importance"],
                    [[k, v] for k, v in fo["importance"].items()]))
        push("")

    if "cross_validation" in doc:
        cv = doc["cross_validation"]
        comp = doc.get("comparison", {})
        starred = comp.get("significant") and comp.get("winner") == "forest"
        push(f"{cv['k']}-fold cross-validation (pooled out-of-fold metrics)")
        push("-" * 70)
        lin, rf = cv["linear"], cv["forest"]
        push(
            _table(
                ["Metrics", "Linear Regression", "Random Forest" + ("*" if starred else "")],
                [
                    ["MAE", lin["mae"], rf["mae"]],
                    ["RMSE", lin["rmse"], rf["rmse"]],
                    ["Correlation Coefficient (r)", lin["pearson_r"], rf["pearson_r"]],
                    ["r^2", lin["pearson_r_squared"], rf["pearson_r_squared"]],
                ],
            )
        )
        push("* = significantly better than the linear model at the configured alpha")
        push("")
        push(
            _table(
                ["Fold", "Linear MAE", "Forest MAE"],
                [
                    [str(a["fold"]), a["mae"], b["mae"]]
                    for a, b in zip(lin["per_fold"], rf["per_fold"])
                ],
            )
        )
        push("")

    if "comparison" in doc:
        c = doc["comparison"]
        push("paired t-test on per-fold MAE (linear - forest)")
        push("-" * 70)
        push(
            f"t = {_num(c['t_stat'])}, df = {c['df']}, p = {_num(c['p_value'])}, "
            f"winner at alpha={c['alpha']}: {c['winner']}"
            + (" *" if c["significant"] else "")
        )
        push("")

    return "\n".join(out) + "\n"


# --- CSV tables from the document ----------------------------------------


def _csv_lines(headers, rows) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [",".join(headers)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_tables(doc: dict) -> dict[str, str]:
    """All plot-data and summary CSVs derivable from the document."""
    tables: dict[str, str] = {}
    if "screen" in doc:
        tables["screen.csv"] = _csv_lines(
            ["predictor", "f_stat", "r_squared", "rse"],
            [[r["predictor"], r["f_stat"], r["r_squared"], r["rse"]]
             for r in doc["screen"]],
        )
    if "correlation" in doc:
        corr = doc["correlation"]
        names = corr["names"]
        rows = []
        for i in range(len(names)):
            for j in range(len(names)):
                rows.append(
                    [names[i], names[j], corr["r"][i][j]]
                    + [mask[i][j] for mask in corr["masks"].values()]
                )
        tables["correlation.csv"] = _csv_lines(
            ["row", "col", "r"] + [f"significant_{lvl}" for lvl in corr["masks"]],
            rows,
        )
    if "vif" in doc:
        tables["vif.csv"] = _csv_lines(
            ["predictor", "vif", "flagged"],
            [[k, v, v >= doc["vif"]["threshold"]]
             for k, v in doc["vif"]["values"].items()],
        )
    for key in ("fit", "refit"):
        if key in doc and doc[key]:
            tables[f"coefficients_{key}.csv"] = _csv_lines(
                ["name", "estimate", "std_error", "t_value", "p_value", "stars"],
                [[r["name"], r["estimate"], r["std_error"], r["t_value"],
                  r["p_value"], r["stars"]] for r in doc[key]["coefficients"]],
            )
    if "diagnostics" in doc:
        d = doc["diagnostics"]
        tables["residual_vs_fitted.csv"] = _csv_lines(
            ["fitted", "residual"], d["residual_vs_fitted"]
        )
        tables["qq.csv"] = _csv_lines(
            ["theoretical_quantile", "sample_quantile"], d["qq"]
        )
        tables["acf.csv"] = _csv_lines(
            ["lag", "correlation", "band"],
            [[lag, v, d["acf_band"]] for lag, v in d["acf"]],
        )
        for name, series in d["component_residual"].items():
            tables[f"component_residual_{name}.csv"] = _csv_lines(
                [name, "partial_residual"], series
            )
    if "forest" in doc:
        tables["feature_importance.csv"] = _csv_lines(
            ["feature", "importance"],
            [[k, v] for k, v in doc["forest"]["importance"].items()],
        )
    if "cross_validation" in doc:
        cv = doc["cross_validation"]
        tables["cv_metrics.csv"] = _csv_lines(
            ["metric", "linear", "forest"],
            [
                ["mae", cv["linear"]["mae"], cv["forest"]["mae"]],
                ["rmse", cv["linear"]["rmse"], cv["forest"]["rmse"]],
                ["pearson_r", cv["linear"]["pearson_r"], cv["forest"]["pearson_r"]],
                ["pearson_r_squared", cv["linear"]["pearson_r_squared"],
                 cv["forest"]["pearson_r_squared"]],
            ],
        )
        tables["cv_folds.csv"] = _csv_lines(
            ["fold", "linear_mae", "linear_rmse", "forest_mae", "forest_rmse"],
            [
                [a["fold"], a["mae"], a["rmse"], b["mae"], b["rmse"]]
                for a, b in zip(cv["linear"]["per_fold"], cv["forest"]["per_fold"])
            ],
        )
    if "comparison" in doc:
        c = doc["comparison"]
        tables["comparison.csv"] = _csv_lines(
            ["t_stat", "p_value", "df", "alpha", "significant", "winner"],
            [[c["t_stat"], c["p_value"], c["df"], c["alpha"],
              c["significant"], c["winner"]]],
        )
    return tables


# --- SVG figures from the document ----------------------------------------


def render_figures(doc: dict) -> dict[str, str]:
    """All SVG figures derivable from the document."""
    figures: dict[str, str] = {}
    if "correlation" in doc:
        corr = doc["correlation"]
        for level, mask in corr["masks"].items():
            figures[f"correlation_{level}.svg"] = svgplot.matrix_svg(
                corr["names"],
                corr["r"],
                mask,
                title=f"Pearson correlation (crosses: not significant at {level})",
            )
    if "vif" in doc:
        v = doc["vif"]
        figures["vif.svg"] = svgplot.bar_svg(
            list(v["values"].keys()),
            list(v["values"].values()),
            title="Variance inflation factors",
            y_label="VIF",
            threshold=v["threshold"],
        )
    if "diagnostics" in doc:
        d = doc["diagnostics"]
        figures["residual_vs_fitted.svg"] = svgplot.scatter_svg(
            d["residual_vs_fitted"],
            title="Residuals vs fitted",
            x_label="fitted value",
            y_label="residual",
            h_lines=[(0.0, "#888", True)],
        )
        qq = d["qq"]
        lo = min(min(t for t, _ in qq), min(s for _, s in qq))
        hi = max(max(t for t, _ in qq), max(s for _, s in qq))
        figures["qq.svg"] = svgplot.scatter_svg(
            qq,
            title="Normal Q-Q",
            x_label="theoretical quantile",
            y_label="standardized residual",
            lines=[([(lo, lo), (hi, hi)], "#d62728")],
        )
        figures["acf.svg"] = svgplot.stem_svg(
            d["acf"],
            title="Residual autocorrelation",
            x_label="lag",
            y_label="ACF",
            band=d["acf_band"],
        )
        for name, series in d["component_residual"].items():
            coef = _component_line(series)
            xs = [x for x, _ in series]
            line = [(min(xs), coef[0] + coef[1] * min(xs)),
                    (max(xs), coef[0] + coef[1] * max(xs))]
            figures[f"component_residual_{name}.svg"] = svgplot.scatter_svg(
                series,
                title=f"Component + residual: {name}",
                x_label=name,
                y_label="partial residual",
                lines=[(line, "#d62728")],
            )
    if "forest" in doc:
        imp = doc["forest"]["importance"]
        figures["feature_importance.svg"] = svgplot.bar_svg(
            list(imp.keys()),
            list(imp.values()),
            title="Forest feature importance",
            y_label="share of split gain",
        )
    return figures


def _component_line(series) -> tuple[float, float]:
    """Least-squares line through a component+residual series."""
    n = len(series)
    sx = sum(x for x, _ in series)
    sy = sum(y for _, y in series)
    sxx = sum(x * x for x, _ in series)
    sxy = sum(x * y for x, y in series)
    denom = n * sxx - sx * sx
    if denom == 0:
        return sy / n, 0.0
    slope = (n * sxy - sx * sy) / denom
    return (sy - slope * sx) / n, slope


def new_document(settings: dict) -> dict:
    return {"spec_version": SPEC_VERSION, "settings": settings}
