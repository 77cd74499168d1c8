"""Distribution kernel tests against closed forms and series oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factorlab.errors import DomainError
from factorlab.special import (
    f_p_upper,
    normal_cdf,
    normal_quantile,
    regularized_incomplete_beta,
    student_t_p_two_sided,
)

# --- independent oracles --------------------------------------------------


def erf_series(x: float) -> float:
    """Taylor series for erf, accurate to ~1e-14 for |x| <= 4."""
    total = 0.0
    term = x
    n = 0
    while abs(term / (2 * n + 1)) > 1e-17 and n < 200:
        total += term / (2 * n + 1)
        n += 1
        term *= -x * x / n
    return 2.0 / math.sqrt(math.pi) * total


def phi_oracle(z: float) -> float:
    return 0.5 * (1.0 + erf_series(z / math.sqrt(2.0)))


def quantile_oracle(p: float) -> float:
    """Bisection of the erf-series CDF."""
    lo, hi = -8.0, 8.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if phi_oracle(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- regularized incomplete beta -------------------------------------------


def test_beta_boundaries():
    assert regularized_incomplete_beta(2.5, 1.5, 0.0) == 0.0
    assert regularized_incomplete_beta(2.5, 1.5, 1.0) == 1.0


def test_beta_uniform_case():
    assert regularized_incomplete_beta(1, 1, 0.3) == pytest.approx(0.3, abs=1e-12)


def test_beta_symmetric_midpoint():
    assert regularized_incomplete_beta(2, 2, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_beta_quadratic_closed_form():
    # I_x(2, 2) = x^2 (3 - 2x), the Beta(2,2) CDF, integrated by hand.
    for x in (0.1, 0.25, 0.6, 0.9):
        expected = x * x * (3 - 2 * x)
        assert regularized_incomplete_beta(2, 2, x) == pytest.approx(
            expected, abs=1e-12
        )


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(0.2, 40),
    b=st.floats(0.2, 40),
    x=st.floats(0.0, 1.0),
)
def test_beta_reflection_identity(a, b, x):
    left = regularized_incomplete_beta(a, b, x)
    right = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
    assert left == pytest.approx(right, abs=1e-10)


def test_beta_monotone_in_x():
    values = [
        regularized_incomplete_beta(3.0, 1.7, x / 20) for x in range(21)
    ]
    assert all(lo <= hi + 1e-15 for lo, hi in zip(values, values[1:]))


def test_beta_domain_errors():
    with pytest.raises(DomainError):
        regularized_incomplete_beta(0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        regularized_incomplete_beta(1.0, -1.0, 0.5)
    with pytest.raises(DomainError):
        regularized_incomplete_beta(1.0, 1.0, 1.5)


# --- Student t ---------------------------------------------------------------


def test_t_at_zero_is_one():
    for df in (1, 2, 17, 120):
        assert student_t_p_two_sided(0.0, df) == 1.0


def test_t_df1_matches_cauchy_closed_form():
    # Cauchy CDF: F(t) = 1/2 + arctan(t)/pi, so the two-sided tail at t=1 is 0.5.
    assert student_t_p_two_sided(1.0, 1) == pytest.approx(0.5, abs=1e-10)
    for t in (0.5, 2.0, 7.3):
        expected = 2.0 * (0.5 - math.atan(t) / math.pi)
        assert student_t_p_two_sided(t, 1) == pytest.approx(expected, abs=1e-10)


def test_t_df2_closed_form():
    for t in (0.3, 1.0, 2.5, 6.0):
        expected = 1.0 - t / math.sqrt(2.0 + t * t)
        assert student_t_p_two_sided(t, 2) == pytest.approx(expected, abs=1e-9)


def test_t_strictly_decreasing_in_abs_t():
    ts = [0.1, 0.4, 1.0, 2.2, 4.0, 8.0]
    ps = [student_t_p_two_sided(t, 11) for t in ts]
    assert all(a > b for a, b in zip(ps, ps[1:]))
    assert student_t_p_two_sided(-2.2, 11) == student_t_p_two_sided(2.2, 11)


def test_t_large_statistic_tail():
    # two-sided p at t=8.235, df=60; reported to three figures as 1.95e-11
    p = student_t_p_two_sided(8.235, 60)
    assert abs(p / 1.95e-11 - 1.0) < 0.05


def test_t_domain_error():
    with pytest.raises(DomainError):
        student_t_p_two_sided(1.0, 0)


# --- F ----------------------------------------------------------------------


def test_f_at_zero_is_one():
    assert f_p_upper(0.0, 3, 10) == 1.0


def test_f_t_squared_identity():
    t, df = 2.5, 10
    assert f_p_upper(t * t, 1, df) == pytest.approx(
        student_t_p_two_sided(t, df), abs=1e-12
    )


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0.01, 20), df=st.integers(1, 200))
def test_f_t_identity_property(t, df):
    assert f_p_upper(t * t, 1, df) == pytest.approx(
        student_t_p_two_sided(t, df), abs=1e-9
    )


def test_f_extreme_tail():
    assert f_p_upper(56.21, 6, 60) < 2.2e-16


def test_f_domain_errors():
    with pytest.raises(DomainError):
        f_p_upper(-1.0, 3, 10)
    with pytest.raises(DomainError):
        f_p_upper(1.0, 0, 10)
    with pytest.raises(DomainError):
        f_p_upper(1.0, 3, 0)


# --- normal quantile ---------------------------------------------------------


def test_quantile_median_exact():
    assert normal_quantile(0.5) == 0.0


def test_quantile_975_against_series_oracle():
    # frozen from quantile_oracle(0.975) = 1.9599639845...
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
    assert normal_quantile(0.975) == pytest.approx(quantile_oracle(0.975), abs=1e-8)


def test_quantile_matches_oracle_across_range():
    for p in (0.001, 0.025, 0.2, 0.4, 0.77, 0.95, 0.999):
        assert normal_quantile(p) == pytest.approx(quantile_oracle(p), abs=1e-8)


def test_quantile_symmetry():
    assert normal_quantile(0.3) == pytest.approx(-normal_quantile(0.7), abs=1e-10)


def test_quantile_round_trip():
    for p in (1e-6, 0.01, 0.37, 0.5, 0.93, 1 - 1e-6):
        assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-12)


def test_quantile_strictly_increasing():
    ps = [i / 40 for i in range(1, 40)]
    zs = [normal_quantile(p) for p in ps]
    assert all(a < b for a, b in zip(zs, zs[1:]))


def test_quantile_domain_errors():
    for p in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            normal_quantile(p)
