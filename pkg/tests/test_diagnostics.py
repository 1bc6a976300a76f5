# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import math

import numpy as np
import pytest

from coint_causality.core import ols_fit
from coint_causality.diagnostics import (NOT_COMPUTED, VERDICTS, breusch_godfrey, diagnose, jarque_bera,
                                         jarque_bera_joint, ramsey_reset, vif, white_test)
from coint_causality.errors import Degrees_Of_Freedom_Error, Insufficient_Data_Error, Parameter_Error


def regression(rng, nobs=120, errors=None):
    X = np.column_stack([np.ones(nobs), rng.standard_normal((nobs, 2))])
    u = rng.standard_normal(nobs) if errors is None else errors
    y = X @ np.array([1.0, 0.5, -0.3]) + u
    return y, X


def r_squared(y, X):
    residuals = y - X @ np.linalg.lstsq(X, y, rcond=None)[0]
    centred = y - y.mean()
    return 1.0 - residuals @ residuals / (centred @ centred)


def test_breusch_godfrey_is_t_times_r_squared(rng):
    y, X = regression(rng)
    fit = ols_fit(y, X)
    u = fit.residuals[:, 0]
    for lags in (1, 2, 4):
        lagged = np.column_stack([np.concatenate((np.zeros(j), u[:-j])) for j in range(1, lags + 1)])
        expected = u.size * r_squared(u, np.hstack([X, lagged]))
        result = breusch_godfrey(fit, lags)
        assert result.statistic == pytest.approx(expected, rel=1e-8)
        assert result.df == (lags,)
        assert 0 <= result.p_value <= 1


def test_breusch_godfrey_detects_autocorrelation(rng):
    e = rng.standard_normal(300)
    u = np.zeros(300)
    for t in range(1, 300):
        u[t] = 0.7 * u[t - 1] + e[t]
    y, X = regression(rng, 300, u)
    assert breusch_godfrey(ols_fit(y, X), 1).rejected
    with pytest.raises(Parameter_Error):
        breusch_godfrey(ols_fit(y, X), 0)


def test_white_is_t_times_r_squared(rng):
    y, X = regression(rng)
    fit = ols_fit(y, X)
    u2 = fit.residuals[:, 0] ** 2
    a, b = X[:, 1], X[:, 2]
    cross = np.column_stack([np.ones(120), a, b, a ** 2, a * b, b ** 2])
    result = white_test(fit)
    assert result.statistic == pytest.approx(120 * r_squared(u2, cross), rel=1e-8)
    assert result.df == (5,)
    assert result.note == 'cross terms'
    plain = white_test(fit, cross_terms=False)
    assert plain.statistic == pytest.approx(120 * r_squared(u2, np.delete(cross, 4, axis=1)), rel=1e-8)
    assert plain.df == (4,)
    assert plain.note == 'no cross terms'


def test_white_detects_heteroskedasticity(rng):
    y, X = regression(rng, 400)
    y = X @ np.array([1.0, 0.5, -0.3]) + np.exp(X[:, 1]) * rng.standard_normal(400)
    assert white_test(ols_fit(y, X)).rejected


def too_wide_for_white(rng, nobs=20):
    X = np.column_stack([np.ones(nobs), rng.standard_normal((nobs, 10))])
    return ols_fit(X.sum(axis=1) + rng.standard_normal(nobs), X)


def test_white_needs_degrees_of_freedom(rng):
    fit = too_wide_for_white(rng)
    for cross_terms in (False, True):
        with pytest.raises(Degrees_Of_Freedom_Error):
            white_test(fit, cross_terms=cross_terms)


def test_white_fitted_value_variant_is_opt_in(rng):
    result = white_test(too_wide_for_white(rng), cross_terms=False, fallback=True)
    assert result.note == 'fitted values'
    assert result.df == (2,)


def test_diagnose_leaves_out_a_white_test_that_does_not_fit(rng):
    report = diagnose(too_wide_for_white(rng), bg_lags=(1,), reset_power=2)
    assert report.white is None
    assert report.verdicts['white'] == NOT_COMPUTED
    assert report.notes[0].startswith('White test not computed')
    assert len(report.tests()) == 1 + 1 + 3
    fallback = diagnose(too_wide_for_white(rng), bg_lags=(1,), reset_power=2, white_fallback=True)
    assert fallback.white.note == 'fitted values'


def test_jarque_bera_formula(rng):
    u = rng.standard_t(5, 200)
    e = u - u.mean()
    skewness = np.mean(e ** 3) / np.mean(e ** 2) ** 1.5
    kurtosis = np.mean(e ** 4) / np.mean(e ** 2) ** 2
    expected = 200 / 6.0 * (skewness ** 2 + (kurtosis - 3.0) ** 2 / 4.0)
    assert jarque_bera(u).statistic == pytest.approx(expected, rel=1e-10)
    assert jarque_bera(3.0 * u - 7.0).statistic == pytest.approx(expected, rel=1e-10)
    assert jarque_bera_joint(u).statistic == pytest.approx(jarque_bera(u).statistic, rel=1e-10)
    assert jarque_bera_joint(u).df == (2,)
    assert jarque_bera(rng.exponential(size=200)).rejected
    with pytest.raises(Insufficient_Data_Error):
        jarque_bera(u[:5])


def test_joint_jarque_bera_degrees_of_freedom(rng):
    result = jarque_bera_joint(rng.standard_normal((200, 3)))
    assert result.df == (6,)
    assert result.statistic >= 0


def test_reset_from_restricted_and_augmented_ssr(rng):
    y, X = regression(rng)
    fit = ols_fit(y, X)
    fitted = y - fit.residuals[:, 0]
    augmented = np.column_stack([X, fitted ** 2, fitted ** 3])
    ssr_r = fit.residuals[:, 0] @ fit.residuals[:, 0]
    u = y - augmented @ np.linalg.lstsq(augmented, y, rcond=None)[0]
    ssr_u = u @ u
    reset = ramsey_reset(fit, 3)
    assert reset.f.statistic == pytest.approx((ssr_r - ssr_u) / 2 / (ssr_u / 115), rel=1e-6)
    assert reset.lr.statistic == pytest.approx(120 * math.log(ssr_r / ssr_u), rel=1e-6)
    assert reset.f.df == (2, 120 - 3 - 2)
    assert reset.t.statistic ** 2 == pytest.approx(ramsey_reset(ols_fit(y, X), 2).f.statistic, rel=1e-8)
    with pytest.raises(Parameter_Error):
        ramsey_reset(ols_fit(y, X), 1)


def test_reset_detects_missing_curvature(rng):
    x = rng.uniform(0, 3, 200)
    y = 1.0 + x ** 2 + 0.3 * rng.standard_normal(200)
    assert ramsey_reset(ols_fit(y, np.column_stack([np.ones(200), x])), 3).rejected


def test_vif_is_one_over_one_minus_r_squared(rng):
    z = rng.standard_normal((100, 3))
    z[:, 2] += 0.8 * z[:, 0]
    X = np.column_stack([np.ones(100), z])
    ours = vif(X, ('const', 'a', 'b', 'c'))
    assert set(ours) == {'a', 'b', 'c'}
    for j, label in enumerate(('a', 'b', 'c'), start=1):
        assert ours[label] == pytest.approx(1.0 / (1.0 - r_squared(X[:, j], np.delete(X, j, axis=1))), rel=1e-8)
    rescaled = vif(X * np.array([1.0, 5.0, -0.1, 30.0]), ('const', 'a', 'b', 'c'))
    assert rescaled == pytest.approx(ours, rel=1e-8)


def test_vif_of_collinear_columns(rng):
    z = rng.standard_normal((50, 2))
    X = np.column_stack([np.ones(50), z, z[:, 0] + z[:, 1]])
    assert all(math.isinf(value) for value in vif(X).values())
    with pytest.raises(Parameter_Error):
        vif(np.column_stack([np.ones(50), z[:, 0]]))


def test_diagnose_verdicts(rng):
    y, X = regression(rng, 200)
    report = diagnose(ols_fit(y, X), bg_lags=(1, 2))
    assert len(report.breusch_godfrey) == 2
    assert len(report.tests()) == 2 + 1 + 1 + 3
    assert set(report.verdicts) == set(VERDICTS)
    assert report.verdicts['vif'] == VERDICTS['vif'][0]
    for name, verdict in report.verdicts.items():
        assert verdict in VERDICTS[name]
    assert report.notes == ('White test variant: cross terms',)


def test_diagnose_flags_collinearity(rng):
    y, X = regression(rng, 200)
    collinear = np.column_stack([X, X[:, 1] + 0.01 * rng.standard_normal(200)])
    report = diagnose(ols_fit(y, X), vif_matrix=collinear)
    assert report.verdicts['vif'] == VERDICTS['vif'][1]
