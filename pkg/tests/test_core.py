# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from coint_causality.core import (Series, Test_Result, align, diff, integrate, lag_matrix, natural_log,
                                  newey_west_lrv, ols_fit, system_ols, t_test, wald_block_test)
from coint_causality.errors import (Alignment_Error, Degrees_Of_Freedom_Error, Domain_Error,
                                    Insufficient_Data_Error, Invalid_Restriction_Error, Parse_Error,
                                    Singular_Matrix_Error)

from conftest import make_dataset


def test_ols_matches_normal_equations(rng):
    for _ in range(100):
        X = np.column_stack([np.ones(40), rng.standard_normal((40, 2))])
        y = X @ rng.standard_normal(3) + rng.standard_normal(40)
        fit = ols_fit(y, X)
        oracle = np.linalg.solve(X.T @ X, X.T @ y)
        np.testing.assert_allclose(fit.coefficients[:, 0], oracle, rtol=1e-8, atol=1e-12)


def test_ols_statistics(rng):
    X = np.column_stack([np.ones(50), rng.standard_normal(50)])
    y = 2.0 + 3.0 * X[:, 1] + rng.standard_normal(50)
    fit = ols_fit(y, X, ('const', 'x'))
    u = fit.residuals[:, 0]
    assert fit.df_resid == 48
    assert fit.has_constant
    assert fit.ssr_per_equation[0] == pytest.approx(u @ u)
    sigma2 = u @ u / 48
    se = np.sqrt(sigma2 * np.diag(np.linalg.inv(X.T @ X)))
    np.testing.assert_allclose(fit.standard_errors[:, 0], se, rtol=1e-10)
    centred = y - y.mean()
    assert fit.r_squared[0] == pytest.approx(1 - (u @ u) / (centred @ centred))
    expected_logl = -25 * (1 + math.log(2 * math.pi)) - 25 * math.log(u @ u / 50)
    assert fit.log_likelihood == pytest.approx(expected_logl)


def test_wald_on_one_coefficient_is_squared_t(rng):
    X = np.column_stack([np.ones(30), rng.standard_normal((30, 2))])
    y = X @ np.array([1.0, 0.5, 0.0]) + rng.standard_normal(30)
    fit = ols_fit(y, X)
    wald = wald_block_test(fit, 0, [2])
    t = t_test(fit, 0, 2)
    assert wald.statistic == pytest.approx(t.statistic ** 2)
    assert wald.df == (1,)
    with pytest.raises(Invalid_Restriction_Error):
        wald_block_test(fit, 0, [])
    with pytest.raises(Invalid_Restriction_Error):
        wald_block_test(fit, 0, [5])


def test_system_likelihood_ignores_column_order(rng):
    X = np.column_stack([np.ones(40), rng.standard_normal((40, 3))])
    Y = X @ rng.standard_normal((4, 2)) + rng.standard_normal((40, 2))
    order = [2, 0, 3, 1]
    fit = system_ols(Y, X)
    shuffled = system_ols(Y, X[:, order])
    assert shuffled.log_likelihood == pytest.approx(fit.log_likelihood, rel=1e-12)
    np.testing.assert_allclose(shuffled.coefficients, fit.coefficients[order], rtol=1e-10)


def test_wald_ignores_regressor_scale(rng):
    X = np.column_stack([np.ones(40), rng.standard_normal((40, 3))])
    y = X @ np.array([0.5, 0.2, -0.3, 0.1]) + rng.standard_normal(40)
    wald = wald_block_test(ols_fit(y, X), 0, [1, 3])
    rescaled = wald_block_test(ols_fit(y, X * np.array([1.0, 1e3, 1.0, 1e-3])), 0, [1, 3])
    assert rescaled.statistic == pytest.approx(wald.statistic, rel=1e-8)


def test_collinear_columns_are_named(rng):
    x = rng.standard_normal(20)
    X = np.column_stack([np.ones(20), x, 2.0 * x])
    with pytest.raises(Singular_Matrix_Error) as info:
        system_ols(rng.standard_normal(20), X, ('const', 'x', 'x2'))
    assert set(info.value.columns) == {'x', 'x2'}


def test_too_few_observations():
    with pytest.raises(Degrees_Of_Freedom_Error):
        system_ols(np.arange(3.0), np.ones((3, 3)) + np.eye(3))


@settings(max_examples=50)
@given(arrays(np.float64, st.integers(2, 30), elements=st.floats(-1e3, 1e3)))
def test_integrate_inverts_diff(values):
    s = Series('x', 1990, values)
    restored = integrate(diff(s), values[0])
    assert restored.start_year == 1990
    assert restored.name == 'x'
    np.testing.assert_allclose(restored.values, values, atol=1e-8)


def test_diff_names_and_years():
    s = Series('TRADE', 1980, np.array([1.0, 3.0, 6.0]))
    ds = diff(s)
    assert ds.name == 'ΔTRADE'
    assert ds.start_year == 1981
    np.testing.assert_array_equal(ds.values, [2.0, 3.0])
    with pytest.raises(Insufficient_Data_Error):
        diff(s, 3)


def test_log_of_non_positive_value():
    with pytest.raises(Domain_Error) as info:
        natural_log(Series('GDPPC', 1980, np.array([1.0, 0.0, 2.0])))
    assert info.value.year == 1981


def test_missing_values_are_rejected():
    with pytest.raises(Parse_Error):
        Series('x', 1980, np.array([1.0, np.nan]))


def test_align_truncates_to_common_sample():
    a = Series('a', 1980, np.arange(10.0))
    b = Series('b', 1983, np.arange(10.0))
    d = align([a, b])
    assert d.sample == (1983, 1989)
    assert d.series('a').at(1983) == 3.0
    with pytest.raises(Alignment_Error):
        align([a, Series('c', 2000, np.arange(3.0))])


def test_lag_matrix_layout():
    d = make_dataset(np.arange(40.0).reshape(20, 2), ('A', 'B'), 1980)
    design = lag_matrix(d, 2)
    assert design.column_labels == ('A.L1', 'A.L2', 'B.L1', 'B.L2', 'const')
    assert design.target_labels == ('A', 'B')
    assert design.t_eff == 18
    assert design.years[0] == 1982
    # row 0 is 1982: A lags are 1981 and 1980
    np.testing.assert_array_equal(design.regressors[0], [2.0, 0.0, 3.0, 1.0, 1.0])

    differenced = lag_matrix(d, 1, 'intercept_trend', differenced=True)
    assert differenced.column_labels == ('ΔA.L1', 'ΔB.L1', 'const', 'trend')
    assert differenced.target_labels == ('ΔA', 'ΔB')
    assert differenced.t_eff == 18

    assert lag_matrix(d, 1, offset=2).t_eff == lag_matrix(d, 3).t_eff


def test_test_result_decisions():
    upper = Test_Result('F', 20.0, 'supF', critical_value=16.19)
    lower = Test_Result('t', -3.0, 't', critical_value=-2.94, reject_upper=False)
    by_p = Test_Result('chi2', 1.0, 'chi2', (1,), p_value=0.3)
    assert upper.rejected and upper.decision == 'reject_null'
    assert lower.rejected
    assert not by_p.rejected
    assert by_p.at_level(0.5).rejected


def test_newey_west_without_lags_is_variance(rng):
    u = rng.standard_normal(100)
    assert newey_west_lrv(u, 0) == pytest.approx(np.var(u))
