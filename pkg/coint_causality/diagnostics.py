# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Residual and specification diagnostics on a fitted regression: serial
correlation (Breusch-Godfrey), normality (Jarque-Bera, univariate and joint),
heteroskedasticity (White), functional form (RESET) and collinearity (VIF).
Single-equation tests run on one equation of a System_Fit, the first by default,
re-fitted as a statsmodels OLS so the statsmodels.stats tests apply directly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg, stats
from statsmodels.regression.linear_model import OLS
from statsmodels.stats.diagnostic import acorr_breusch_godfrey, het_breuschpagan, het_white, linear_reset
from statsmodels.stats.outliers_influence import variance_inflation_factor
from statsmodels.stats.stattools import jarque_bera as _jarque_bera

from coint_causality.core import Test_Result
from coint_causality.errors import Degenerate_Input_Error, Degrees_Of_Freedom_Error, Insufficient_Data_Error, Parameter_Error

logger = logging.getLogger(__name__)

VIF_LIMIT = 10.0
VIF_INFINITE = 1e12  # larger values are reported as perfect collinearity
VERDICTS = {
    'breusch_godfrey': ('There is no autocorrelation', 'There is autocorrelation'),
    'jarque_bera': ('Residuals are normally distributed', 'Residuals are not normally distributed'),
    'white': ('We do not have heteroskedasticity', 'We have heteroskedasticity'),
    'reset': ('Our model is correctly specified', 'Our model is not correctly specified'),
    'vif': ('No Serious Multicollinearity is present (VIF<10)', 'Serious Multicollinearity is present (VIF>=10)'),
}
NOT_COMPUTED = 'Not computed: too few observations'


def _equation(fit, equation):
    eq = fit.equation(equation)
    return fit.targets[:, eq], fit.regressors, fit.residuals[:, eq], fit.equation_labels[eq]


def _ols(fit, equation):
    y, X, _, label = _equation(fit, equation)
    return OLS(y, X).fit(), label


def _non_constant(X, labels=None):
    keep = [j for j in range(X.shape[1]) if np.ptp(X[:, j]) > 0]
    labels = labels if labels is not None else tuple(f'x{j}' for j in range(X.shape[1]))
    return X[:, keep], tuple(labels[j] for j in keep)


def breusch_godfrey(fit, lags, equation=0, level=0.05):
    """ T * R² of the residuals on the regressors and ``lags`` zero-padded lagged residuals. """
    results, label = _ols(fit, equation)
    nobs = int(results.nobs)
    if lags < 1 or lags >= nobs:
        raise Parameter_Error(f'Breusch-Godfrey lags must lie in 1..{nobs - 1}, got {lags}')
    lm, p_value, _, _ = acorr_breusch_godfrey(results, nlags=lags)
    return Test_Result(f'breusch_godfrey[{label}]', float(lm), 'chi2', (lags,), float(p_value), level)


def _check_variance(u):
    if np.ptp(u) <= 1e-14 * max(1.0, float(np.max(np.abs(u)))):
        raise Degenerate_Input_Error('residuals have zero variance')


def jarque_bera(u, level=0.05):
    u = np.asarray(u, dtype=float).ravel()
    if u.size < 8:
        raise Insufficient_Data_Error(f'Jarque-Bera needs 8 observations, has {u.size}')
    _check_variance(u)
    statistic, p_value, _, _ = _jarque_bera(u)
    return Test_Result('jarque_bera', float(statistic), 'chi2', (2,), float(p_value), level)


def jarque_bera_joint(residuals, level=0.05):
    """ Sum of component statistics after Cholesky orthogonalisation; chi-square with 2n df. """
    E = np.asarray(residuals, dtype=float)
    if E.ndim == 1:
        E = E[:, None]
    nobs, n = E.shape
    if nobs < 8:
        raise Insufficient_Data_Error(f'Jarque-Bera needs 8 observations, has {nobs}')
    E = E - E.mean(axis=0)
    for j in range(n):
        _check_variance(E[:, j])
    sigma = E.T @ E / nobs
    try:
        P = linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError:
        raise Degenerate_Input_Error('residual covariance is not positive definite') from None
    W = linalg.solve_triangular(P, E.T, lower=True).T
    statistic = float(np.sum(_jarque_bera(W, axis=0)[0]))
    df = 2 * n
    return Test_Result('jarque_bera_joint', statistic, 'chi2', (df,), float(stats.chi2.sf(statistic, df)), level)


def _white_size(k, cross_terms):
    """ Auxiliary regressors, intercept included, for k non-constant regressors. """
    return (k + 1) * (k + 2) // 2 if cross_terms else 1 + 2 * k


def white_test(fit, cross_terms=None, equation=0, level=0.05, fallback=False):
    """
    T * R² of squared residuals on the regressors and their squares, plus cross
    products when asked (default: only for at most five regressors). A design
    that does not fit the sample raises Degrees_Of_Freedom_Error; with
    ``fallback`` the fitted-value form (ŷ, ŷ²) is used instead. The note names
    the variant.
    """
    y, X, u, label = _equation(fit, equation)
    Z, _ = _non_constant(X)
    nobs = u.size
    if cross_terms is None:
        cross_terms = Z.shape[1] <= 5
    size = _white_size(Z.shape[1], cross_terms)
    exog = np.column_stack([np.ones(nobs), Z])
    if size < nobs:
        if cross_terms:
            lm, p_value, _, _ = het_white(u, exog)
            first, second = np.triu_indices(exog.shape[1])
            products = exog[:, first] * exog[:, second]
            df = int(np.linalg.matrix_rank(products)) - 1
            variant = 'cross terms'
        else:
            lm, p_value, _, _ = het_breuschpagan(u, np.hstack([exog, Z ** 2]), robust=True)
            df = size - 1
            variant = 'no cross terms'
    elif fallback:
        fitted = y - u
        scaled = fitted / np.std(fitted)
        lm, p_value, _, _ = het_breuschpagan(u, np.column_stack([np.ones(nobs), scaled, scaled ** 2]), robust=True)
        df = 2
        variant = 'fitted values'
        logger.debug('white[%s]: %d regressors too many for %d rows, using fitted values', label, Z.shape[1], nobs)
    else:
        raise Degrees_Of_Freedom_Error(f'White auxiliary regression has {size} regressors for {nobs} rows')
    return Test_Result(f'white[{label}]', float(lm), 'chi2', (df,), float(p_value), level, note=variant)


@dataclass(frozen=True)
class Reset_Result:
    t: Test_Result
    f: Test_Result
    lr: Test_Result

    def __iter__(self):
        return iter((self.t, self.f, self.lr))

    @property
    def rejected(self):
        return any(test.rejected for test in self)


def ramsey_reset(fit, max_power=3, equation=0, level=0.05):
    """ t on ŷ² alone; F and LR on the powers 2..max_power of the fitted values. """
    if max_power < 2:
        raise Parameter_Error(f'RESET needs max_power >= 2, got {max_power}')
    restricted, label = _ols(fit, equation)
    y, X = restricted.model.endog, restricted.model.exog
    nobs, k = X.shape
    q = max_power - 1
    df_u = nobs - k - q
    if df_u <= 0:
        raise Degrees_Of_Freedom_Error(f'RESET augmentation leaves {df_u} degrees of freedom')
    fitted = restricted.fittedvalues
    if np.max(np.abs(fitted)) == 0:
        raise Degenerate_Input_Error('fitted values are identically zero')

    single = OLS(y, np.column_stack([X, fitted ** 2])).fit()
    t = float(single.tvalues[-1])
    t_result = Test_Result(f'reset_t[{label}]', t, 't', (int(single.df_resid),), float(single.pvalues[-1]), level)

    f = linear_reset(restricted, power=max_power, test_type='fitted', use_f=True)
    f_result = Test_Result(f'reset_f[{label}]', float(np.squeeze(f.fvalue)), 'F', (q, df_u),
                           float(np.squeeze(f.pvalue)), level)
    augmented = OLS(y, np.column_stack([X, *(fitted ** power for power in range(2, max_power + 1))])).fit()
    lr, lr_p, _ = augmented.compare_lr_test(restricted)
    lr_result = Test_Result(f'reset_lr[{label}]', float(lr), 'chi2', (q,), float(lr_p), level)
    return Reset_Result(t_result, f_result, lr_result)


def vif(X, labels=None):
    """
    1 / (1 - R²) of each non-constant column on the others plus an intercept.
    Perfect collinearity gives ``math.inf``.
    """
    X = np.asarray(X, dtype=float)
    Z, labels = _non_constant(X, labels)
    if Z.shape[1] < 2:
        raise Parameter_Error(f'VIF needs at least two non-constant columns, got {Z.shape[1]}')
    exog = np.column_stack([np.ones(Z.shape[0]), Z])
    result = {}
    with np.errstate(divide='ignore'):
        for j, label in enumerate(labels, start=1):
            value = float(variance_inflation_factor(exog, j))
            if not math.isfinite(value) or value > VIF_INFINITE:
                result[label] = math.inf
                logger.warning('vif: %s is perfectly collinear with the other regressors', label)
            else:
                result[label] = value
    return result


@dataclass(frozen=True)
class Diagnostic_Report:
    equation: str
    breusch_godfrey: tuple
    jarque_bera: Test_Result
    white: Optional[Test_Result]
    reset: Reset_Result
    vif: dict
    verdicts: dict = field(default_factory=dict)
    notes: tuple = ()

    def tests(self):
        white = () if self.white is None else (self.white,)
        return [*self.breusch_godfrey, self.jarque_bera, *white, *self.reset]

    def __str__(self):
        return '\n'.join(f'{name}: {verdict}' for name, verdict in self.verdicts.items())


def diagnose(fit, vif_matrix=None, vif_labels=None, equation=0, bg_lags=(1, 2, 3, 4), reset_power=3,
             white_cross_terms=None, level=0.05, white_fallback=False):
    """
    The full battery on one equation (joint Jarque-Bera on every residual column).
    VIFs are computed on ``vif_matrix`` when given, otherwise on the fit's regressors.
    A White test that does not fit the sample is left out and noted.
    """
    label = fit.equation_labels[fit.equation(equation)]
    bg = tuple(breusch_godfrey(fit, lags, equation, level) for lags in bg_lags)
    jb = jarque_bera_joint(fit.residuals, level)
    try:
        white = white_test(fit, white_cross_terms, equation, level, white_fallback)
        white_note = f'White test variant: {white.note}'
        white_verdict = VERDICTS['white'][white.rejected]
    except Degrees_Of_Freedom_Error as error:
        logger.warning('diagnostics[%s]: White test not computed: %s', label, error)
        white, white_note, white_verdict = None, f'White test not computed: {error}', NOT_COMPUTED
    reset = ramsey_reset(fit, reset_power, equation, level)
    if vif_matrix is None:
        vif_matrix, vif_labels = fit.regressors, fit.column_labels
    vifs = vif(vif_matrix, vif_labels)
    serious = any(value >= VIF_LIMIT for value in vifs.values())
    verdicts = {
        'breusch_godfrey': VERDICTS['breusch_godfrey'][any(t.rejected for t in bg)],
        'jarque_bera': VERDICTS['jarque_bera'][jb.rejected],
        'white': white_verdict,
        'reset': VERDICTS['reset'][reset.rejected],
        'vif': VERDICTS['vif'][serious],
    }
    logger.debug('diagnostics[%s]: %s', label, verdicts)
    return Diagnostic_Report(label, bg, jb, white, reset, vifs, verdicts, (white_note,))
