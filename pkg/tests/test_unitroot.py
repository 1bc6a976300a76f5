# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from statsmodels.regression.linear_model import OLS

from coint_causality.core import Series, ols_fit
from coint_causality.critical_values import CRITICAL_VALUES
from coint_causality.errors import Degenerate_Input_Error, Insufficient_Data_Error, Parameter_Error
from coint_causality.unitroot import (Unit_Root_Result, adf_test, default_max_lags, integration_order, kpss_test,
                                      perron_fixed_break, perron_test, unit_root_table)

from conftest import make_dataset


def drifting_walk(rng, nobs, start_year=1960):
    return Series('y', start_year, np.arange(nobs) + np.cumsum(rng.standard_normal(nobs)))


@pytest.mark.parametrize('det', ['intercept', 'intercept_trend'])
def test_adf_without_augmentation_is_the_lagged_level_t_ratio(rng, det):
    y = np.cumsum(rng.standard_normal(80))
    columns = [y[:-1], np.ones(79)]
    if det == 'intercept_trend':
        columns.append(np.arange(2, 81, dtype=float))
    expected = ols_fit(np.diff(y), np.column_stack(columns)).t_ratios[0, 0]
    ours = adf_test(Series('y', 1, y), det, max_lags=0)
    assert ours.lags_used == 0
    assert ours.nobs == 79
    assert ours.statistic == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize('nobs', [40, 200])
@pytest.mark.parametrize('det', ['intercept', 'intercept_trend'])
def test_adf_decides_against_the_compiled_critical_value(rng, nobs, det):
    result = adf_test(Series('y', 1, np.cumsum(rng.standard_normal(nobs))), det)
    assert result.critical_value == CRITICAL_VALUES.adf(det)
    assert result.rejected == (result.statistic < CRITICAL_VALUES.adf(det))
    assert 0.0 <= result.p_value <= 1.0


def test_adf_rejects_white_noise(rng):
    result = adf_test(Series('e', 1, rng.standard_normal(200)))
    assert result.rejected
    assert result.decision == 'reject_null'
    assert result.p_value < 0.01


def test_kpss_rejects_random_walk(rng):
    result = kpss_test(Series('y', 1, np.cumsum(rng.standard_normal(200))))
    assert result.rejected
    assert result.p_value == 0.01


def test_kpss_rejects_a_linear_trend_without_a_trend_term(rng):
    y = 0.1 * np.arange(500) + rng.standard_normal(500)
    level = kpss_test(Series('y', 1, y), 'intercept')
    trend = kpss_test(Series('y', 1, y), 'intercept_trend')
    assert level.rejected
    assert trend.statistic < level.statistic


@settings(max_examples=25, deadline=None)
@given(st.floats(-100, 100), st.floats(0.1, 10))
def test_statistics_are_affine_invariant(shift, scale):
    y = np.cumsum(np.random.default_rng(7).standard_normal(60))
    s, t = Series('y', 1, y), Series('y', 1, shift + scale * y)
    assert adf_test(t).statistic == pytest.approx(adf_test(s).statistic, rel=1e-6)
    assert kpss_test(t, 'intercept_trend').statistic == pytest.approx(kpss_test(s, 'intercept_trend').statistic,
                                                                      rel=1e-6)


def test_sample_size_checks():
    with pytest.raises(Insufficient_Data_Error):
        adf_test(Series('y', 1, np.arange(12.0)), max_lags=3)
    with pytest.raises(Insufficient_Data_Error):
        kpss_test(Series('y', 1, np.arange(10.0)))
    with pytest.raises(Degenerate_Input_Error):
        kpss_test(Series('y', 1, np.full(30, 2.0)))
    with pytest.raises(Parameter_Error):
        adf_test(Series('y', 1, np.arange(40.0)), 'none')


def test_default_lag_rules():
    assert default_max_lags(40) == 9
    assert default_max_lags(100) == 12


def test_perron_finds_level_shift(rng):
    periods = np.arange(60)
    y = 0.1 * periods + 5.0 * (periods > 20) + 0.5 * rng.standard_normal(60)
    result = perron_test(Series('y', 1960, y), 'both')
    assert result.rejected
    assert abs(result.break_year - 1980) <= 1
    assert result.deterministic == 'intercept_trend'
    assert result.critical_value == -5.59


def test_perron_replication_critical_value(rng):
    y = np.cumsum(rng.standard_normal(40))
    result = perron_test(Series('y', 1980, y), 'both', replicate=True)
    assert result.critical_value == -5.23
    assert 1986 <= result.break_year <= 2013


def test_perron_fixed_break(rng):
    y = np.cumsum(rng.standard_normal(40))
    result = perron_fixed_break(Series('y', 1980, y), 1998)
    assert result.break_year == 1998
    with pytest.raises(Parameter_Error):
        perron_fixed_break(Series('y', 1980, y), 2019)


@pytest.mark.parametrize('lags', [0, 2])
def test_perron_fixed_break_is_the_break_regression_t_ratio(rng, lags):
    y = np.cumsum(rng.standard_normal(40))
    tb = 18
    rows = []
    for t in range(lags + 1, 40):
        rows.append([1.0, t, float(t > tb), float(max(t - tb, 0)), float(t == tb + 1), y[t - 1],
                     *(y[t - j] - y[t - j - 1] for j in range(1, lags + 1))])
    exog = np.array(rows)
    endog = np.diff(y)[lags:]
    expected = OLS(endog, exog).fit().tvalues[5]
    result = perron_fixed_break(Series('y', 1980, y), 1998, lags=lags)
    assert result.lags_used == lags
    assert result.statistic == pytest.approx(expected, rel=1e-8)


def test_break_year_belongs_to_perron_only():
    with pytest.raises(Parameter_Error):
        Unit_Root_Result('ADF', 'intercept', -3.0, -2.94, 0, 38, break_year=1998)
    with pytest.raises(Parameter_Error):
        Unit_Root_Result('PERRON', 'intercept_trend', -3.0, -5.23, 0, 38)


def test_integration_order(rng):
    assert integration_order(drifting_walk(rng, 200)).order == 'I1'
    assert integration_order(Series('e', 1, rng.standard_normal(200))).order == 'I0'


def test_twice_integrated_series_is_inconclusive(rng):
    growth = np.cumsum(0.5 + rng.standard_normal(200))
    verdict = integration_order(Series('y', 1, np.cumsum(growth)))
    assert verdict.order == 'inconclusive'
    assert not verdict.adf_level.rejected
    assert not verdict.adf_difference.rejected


def test_unit_root_table_layout(rng):
    d = make_dataset(np.arange(60)[:, None] + np.cumsum(rng.standard_normal((60, 2)), axis=0), ('A', 'B'), 1960)
    table = unit_root_table(d)
    assert len(table.results) == 20
    assert len(table.verdicts) == 2
    assert len(table.of('ADF', 'A')) == 2
    assert len(table.of('PERRON', 'ΔB')) == 1
    assert {r.deterministic for r in table.of('KPSS', 'A')} == {'intercept', 'intercept_trend'}
