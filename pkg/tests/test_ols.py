"""Linear model fitting, inference identities, screening, prediction."""

import numpy as np
import pytest
from frames import frame_with

from factorlab.data import synthesize
from factorlab.errors import (
    ConstantPredictor,
    DimensionMismatch,
    InsufficientRows,
    RankDeficient,
    UnknownColumn,
)
from factorlab.metrics import pearson_r
from factorlab.ols import (
    coefficient_rows,
    fit_ols,
    predict,
    screen_predictors,
    significance_stars,
)
from factorlab.rng import stream


def test_perfect_fit():
    x = [0.0, 1.0, 2.0, 3.0, 4.0]
    frame = frame_with({"x": x, "price": [2 + 3 * v for v in x]})
    fit = fit_ols(frame, ["x"])
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.rse == pytest.approx(0.0, abs=1e-10)
    assert np.abs(fit.residuals).max() < 1e-10
    assert fit.beta == pytest.approx([2.0, 3.0], abs=1e-10)


def test_hand_solved_three_point_system():
    frame = frame_with({"x": [0.0, 1.0, 2.0], "price": [0.0, 0.0, 3.0]})
    fit = fit_ols(frame, ["x"])
    assert fit.beta == pytest.approx([-0.5, 1.5], abs=1e-12)
    rss = float(fit.residuals @ fit.residuals)
    assert rss == pytest.approx(1.5, abs=1e-12)
    assert fit.residuals == pytest.approx([0.5, -1.0, 0.5], abs=1e-12)
    assert fit.df_resid == 1


def test_residuals_sum_to_zero_with_intercept():
    frame = synthesize(5)
    fit = fit_ols(frame)
    assert abs(fit.residuals.sum()) < 1e-8


def test_coefficient_table_layout():
    frame = synthesize(8)
    order = ("term", "roe", "cr", "tato", "dta", "panel")
    fit = fit_ols(frame, order)
    rows = coefficient_rows(fit)
    assert [r["name"] for r in rows] == ["intercept", *order]
    assert list(rows[0]) == [
        "name", "estimate", "std_error", "t_value", "p_value", "stars",
    ]


def test_inference_identities():
    rng = stream(21, 0)
    for trial in range(25):
        n = int(rng.integers(15, 60))
        p = int(rng.integers(1, 6))
        cols = {f"x{j}": rng.normal(size=n) for j in range(p)}
        beta = rng.normal(size=p)
        noise = rng.normal(size=n)
        cols["price"] = (
            1.0 + sum(beta[j] * cols[f"x{j}"] for j in range(p)) + noise
        )
        frame = frame_with(cols)
        fit = fit_ols(frame, [f"x{j}" for j in range(p)])
        # R^2 equals the squared correlation of fitted values and response
        r = pearson_r(fit.fitted, frame.column("price"))
        assert fit.r_squared == pytest.approx(r * r, abs=1e-10)
        # ANOVA form of F
        y = frame.column("price")
        rss = float(fit.residuals @ fit.residuals)
        tss = float(((y - y.mean()) ** 2).sum())
        f_anova = ((tss - rss) / p) / (rss / fit.df_resid)
        assert fit.f_stat == pytest.approx(f_anova, abs=1e-8, rel=1e-8)


def test_single_predictor_f_equals_t_squared():
    frame = synthesize(31)
    for name in ("dta", "tato", "cr"):
        fit = fit_ols(frame, [name])
        slope_t = fit.t_values[1]
        assert fit.f_stat == pytest.approx(slope_t * slope_t, abs=1e-8, rel=1e-8)


def test_row_permutation_invariance():
    frame = synthesize(13)
    fit = fit_ols(frame)
    perm = stream(13, 9).permutation(frame.n_rows)
    shuffled = frame_with(
        {name: frame.column(name)[perm] for name in frame.column_names}
    )
    fit2 = fit_ols(shuffled, frame.predictor_names)
    assert np.abs(fit.beta - fit2.beta).max() < 1e-8


def test_noise_column_never_decreases_r_squared():
    rng = stream(17, 0)
    frame = synthesize(17)
    base = fit_ols(frame, ("dta", "tato"))
    for _ in range(10):
        cols = {name: frame.column(name) for name in frame.column_names}
        cols["junk"] = rng.normal(size=frame.n_rows)
        grown = fit_ols(frame_with(cols), ("dta", "tato", "junk"))
        assert grown.r_squared >= base.r_squared - 1e-12


def test_stars_convention():
    assert significance_stars(0.0005) == "****"
    assert significance_stars(0.005) == "***"
    assert significance_stars(0.03) == "**"
    assert significance_stars(0.07) == "*"
    assert significance_stars(0.2) == ""


def test_fit_error_paths():
    frame = frame_with({"x": [1.0, 2.0], "price": [1.0, 2.0]})
    with pytest.raises(InsufficientRows):
        fit_ols(frame, ["x"])
    frame = synthesize(3)
    with pytest.raises(UnknownColumn):
        fit_ols(frame, ["nope"])


def test_rank_deficient_names_first_dependent_column():
    base = synthesize(4)
    cols = {name: base.column(name) for name in base.column_names}
    cols["dta_copy"] = cols["dta"].copy()
    frame = frame_with(cols)
    with pytest.raises(RankDeficient) as exc:
        fit_ols(frame, ("dta", "tato", "dta_copy"))
    assert exc.value.column == "dta_copy"


# --- screening -----------------------------------------------------------------


def test_screen_perfectly_collinear_predictor():
    x = np.linspace(0.0, 5.0, 12)
    frame = frame_with({"x": x, "price": 2 * x + 1})
    row = screen_predictors(frame, ["x"])[0]
    assert row.r_squared == pytest.approx(1.0, abs=1e-12)
    assert row.rse == pytest.approx(0.0, abs=1e-10)


def test_screen_independent_predictor_near_zero_r2():
    rng = stream(55, 1)
    frame = frame_with(
        {"x": rng.normal(size=1000), "price": rng.normal(size=1000)}
    )
    row = screen_predictors(frame, ["x"])[0]
    assert row.r_squared < 0.01


def test_screen_row_order_mirrors_request():
    frame = synthesize(6)
    order = ("panel", "dta", "roe", "roa", "tato", "cr", "term")
    rows = screen_predictors(frame, order)
    assert tuple(r.predictor for r in rows) == order
    for row in rows:
        assert 0.0 <= row.r_squared <= 1.0
        assert row.rse >= 0.0


def test_screen_constant_predictor_errors():
    frame = frame_with({"x": [1.0, 1.0, 1.0], "price": [1.0, 2.0, 3.0]})
    with pytest.raises(ConstantPredictor):
        screen_predictors(frame, ["x"])


# --- prediction ------------------------------------------------------------------


def test_predict_matches_training_fitted():
    frame = synthesize(9)
    fit = fit_ols(frame)
    preds = predict(fit, frame.matrix(frame.predictor_names))
    assert np.abs(preds - fit.fitted).max() < 1e-12


def test_predict_intercept_only_is_mean():
    frame = synthesize(9)
    fit = fit_ols(frame, [])
    preds = predict(fit, np.zeros((4, 0)))
    assert preds == pytest.approx([frame.column("price").mean()] * 4, abs=1e-10)


def test_predict_wrong_column_count():
    frame = synthesize(9)
    fit = fit_ols(frame, ("dta", "tato"))
    with pytest.raises(DimensionMismatch):
        predict(fit, np.ones((3, 3)))
