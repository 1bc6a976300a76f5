# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import math

import numpy as np
import pandas as pd
import pytest
from statsmodels.tsa.api import VAR

from coint_causality.errors import Parameter_Error
from coint_causality.var import (final_prediction_error, granger_table, information_criteria, is_stable,
                                 lag_order_select, modified_lr, stability, var_fit, var_granger)

from conftest import make_dataset

# (lag, logL, LR, AIC, SC, HQ) of published lag-selection tables, four variables
EQ1_ROWS = [
    (0, -201.1273, None, 12.06631, 12.24589, 12.12755),
    (1, 2.998838, 348.2152, 1.000068, 1.897927, 1.306264),
    (2, 22.20845, 28.24943, 0.811268, 2.427414, 1.362420),
    (3, 41.47593, 23.80100, 0.619063, 2.953497, 1.415172),
    (4, 55.40166, 13.92573, 0.741079, 3.793800, 1.782144),
    (5, 99.11271, 33.42610, -0.888983, 2.882025, 0.397039),
]
EQ2_ROWS = [
    (0, -180.2458, None, 10.23588, 10.41182, 10.29729),
    (1, 29.84445, 361.8221, -0.546914, 0.332819, -0.239864),
    (2, 47.70304, 26.78788, -0.650169, 0.933350, -0.097478),
    (3, 59.07589, 14.53198, -0.393105, 1.894200, 0.405226),
]
EQ3_ROWS = [
    (0, -222.0543, None, 13.29731, 13.47689, 13.35855),
    (1, -15.05446, 353.1174, 2.062027, 2.959886, 2.368223),
    (2, 3.238808, 26.90187, 1.927129, 3.543275, 2.478281),
    (3, 21.38408, 22.41475, 1.800936, 4.135370, 2.597045),
    (4, 35.11510, 13.73102, 1.934406, 4.987127, 2.975471),
    (5, 70.34910, 26.94364, 0.802994, 4.574003, 2.089016),
]
N = 4


def k_star(lag):
    return 1 + N * lag


@pytest.mark.parametrize('rows, nobs', [(EQ1_ROWS, 34), (EQ2_ROWS, 36), (EQ3_ROWS, 34)])
def test_published_criteria(rows, nobs):
    previous = None
    for lag, logl, lr, aic, sc, hq in rows:
        assert information_criteria(logl, N * k_star(lag), nobs) == pytest.approx((aic, sc, hq), abs=1e-4)
        if lr is not None:
            assert modified_lr(logl, previous, nobs, k_star(lag)) == pytest.approx(lr, abs=1e-3)
        previous = logl


def test_first_published_row():
    aic, sc, hq = information_criteria(-201.1273, 4, 34)
    assert aic == pytest.approx(12.06631, abs=1e-4)
    assert sc == pytest.approx(12.24589, abs=1e-4)
    assert hq == pytest.approx(12.12755, abs=1e-4)
    assert modified_lr(2.998838, 2.998838 - 204.12614, 34, 5) == pytest.approx(348.2152, abs=1e-3)


@pytest.mark.parametrize('lag, logl, fpe', [(0, -201.1273, 2.043927), (1, 2.998838, 3.22e-05), (5, 99.11271, 1.11e-05)])
def test_published_fpe(lag, logl, fpe):
    nobs = 34
    log_det = -2.0 / nobs * (logl + nobs * N / 2.0 * (1.0 + math.log(2.0 * math.pi)))
    assert final_prediction_error(math.exp(log_det), nobs, k_star(lag), N) == pytest.approx(fpe, rel=5e-3)


def simulate_var1(rng, nobs, A, burn_in=100):
    n = A.shape[0]
    y = np.zeros((nobs + burn_in, n))
    e = rng.standard_normal((nobs + burn_in, n))
    for t in range(1, nobs + burn_in):
        y[t] = A @ y[t - 1] + e[t]
    return y[burn_in:]


A1 = np.array([[0.5, 0.0], [0.3, 0.4]])


def test_lag_selection_on_simulated_var(rng):
    d = make_dataset(simulate_var1(rng, 300, A1), ('Y', 'X'))
    table = lag_order_select(d, 4)
    assert len(table.rows) == 5
    assert table.t_eff == 296
    assert math.isnan(table.rows[0].lr_statistic)
    assert table.selected_lag('sc') == 1
    assert table.selected_lag('aic') == int(np.argmin([r.aic for r in table.rows]))
    assert table.is_starred('hq', table.selected_lag('hq'))
    with pytest.raises(Parameter_Error):
        table.selected_lag('bic')
    with pytest.raises(Parameter_Error):
        lag_order_select(d, 0)


def test_var_coefficients_and_stability(rng):
    d = make_dataset(simulate_var1(rng, 2000, A1), ('Y', 'X'))
    fit = var_fit(d, 1)
    A = fit.lag_matrices()[0]
    np.testing.assert_allclose(A, A1, atol=0.06)
    assert A[1, 0] == fit.coefficient('X', 'Y', 1)
    moduli = stability(fit)
    np.testing.assert_allclose(moduli, np.sort(np.abs(np.linalg.eigvals(A)))[::-1])
    assert is_stable(fit)
    assert len(fit.coefficient_table()) == 2 * 3


def test_granger_matches_statsmodels(rng):
    y = simulate_var1(rng, 200, A1)
    d = make_dataset(y, ('Y', 'X'))
    fit = var_fit(d, 2)
    oracle = VAR(pd.DataFrame(y, columns=['Y', 'X'])).fit(2).test_causality('Y', ['X'], kind='wald')
    ours = var_granger(fit, 'X', 'Y')
    assert ours.statistic == pytest.approx(oracle.test_statistic, rel=1e-6)
    assert ours.df == (2,)
    assert var_granger(fit, 'Y', 'X').rejected


def test_granger_table(rng):
    d = make_dataset(simulate_var1(rng, 100, A1), ('Y', 'X'))
    table = granger_table(var_fit(d, 1))
    assert [(cause, effect) for cause, effect, _ in table] == [('X', 'Y'), ('Y', 'X')]
    with pytest.raises(Parameter_Error):
        var_granger(var_fit(d, 1), 'Z', 'Y')
    with pytest.raises(Parameter_Error):
        var_granger(var_fit(d, 0), 'X', 'Y')
