# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Vector autoregressions: estimation, lag-order selection (LogL, LR, FPE, AIC, SC,
HQ on a common sample), block-exogeneity Granger tests and companion-matrix
stability.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from coint_causality.core import fit_design, lag_matrix, wald_block_test
from coint_causality.errors import Parameter_Error

logger = logging.getLogger(__name__)

CRITERIA = ('lr', 'fpe', 'aic', 'sc', 'hq')
LEVELS_CAVEAT = ('VAR estimated in levels on I(1) variables without cointegration; '
                 'Wald statistics may not follow their nominal chi-square distribution.')


@dataclass(frozen=True, eq=False)
class Var_Fit:
    roles: tuple
    lag_order: int
    det: str
    design: object
    fit: object

    @property
    def coefficients(self):
        return self.fit.coefficients

    @property
    def standard_errors(self):
        return self.fit.standard_errors

    @property
    def t_ratios(self):
        return self.fit.t_ratios

    @property
    def differenced(self):
        return self.design.differenced

    @property
    def prefix(self):
        return 'Δ' if self.differenced else ''

    @property
    def intercepts(self):
        if 'const' not in self.fit.column_labels:
            return np.zeros(len(self.roles))
        return self.fit.coefficients[self.fit.column_labels.index('const')]

    def row_of(self, cause, lag):
        label = f'{self.prefix}{cause}.L{lag}'
        try:
            return self.fit.column_labels.index(label)
        except ValueError:
            raise Parameter_Error(f'no regressor {label!r} in the VAR({self.lag_order})') from None

    def equation_of(self, effect):
        if effect not in self.roles:
            raise Parameter_Error(f'role {effect!r} not in VAR {list(self.roles)}')
        return self.roles.index(effect)

    def coefficient(self, effect, cause, lag):
        return float(self.coefficients[self.row_of(cause, lag), self.equation_of(effect)])

    def lag_matrices(self):
        """ A_1..A_p with A_l[i, j] the effect of variable j at lag l on equation i. """
        n, p = len(self.roles), self.lag_order
        A = np.zeros((p, n, n))
        for j in range(n):
            for lag in range(1, p + 1):
                A[lag - 1, :, j] = self.coefficients[j * p + lag - 1]
        return A

    def coefficient_table(self):
        """ Rows of (equation, regressor, coefficient, standard error, t-ratio). """
        rows = []
        se, t = self.standard_errors, self.t_ratios
        for i, equation in enumerate(self.fit.equation_labels):
            for r, label in enumerate(self.fit.column_labels):
                rows.append((equation, label, float(self.coefficients[r, i]), float(se[r, i]), float(t[r, i])))
        return rows

    def __repr__(self):
        kind = 'differences' if self.differenced else 'levels'
        return f'Var_Fit(roles={list(self.roles)}, p={self.lag_order}, det={self.det!r}, {kind}, nobs={self.fit.nobs})'


def var_fit(d, p, det='intercept', differenced=False, offset=0):
    design = lag_matrix(d, p, det, differenced=differenced, offset=offset)
    fit = fit_design(design)
    logger.debug('var(%d) on %s: t_eff=%d logL=%.4f', p, list(d.roles), design.t_eff, fit.log_likelihood)
    return Var_Fit(d.roles, p, det, design, fit)


# ------ information criteria ------

def information_criteria(log_likelihood, k_bar, nobs):
    """ Per-observation AIC, SC and HQ for ``k_bar`` estimated parameters. """
    aic = (-2.0 * log_likelihood + 2.0 * k_bar) / nobs
    sc = (-2.0 * log_likelihood + k_bar * math.log(nobs)) / nobs
    hq = (-2.0 * log_likelihood + 2.0 * k_bar * math.log(math.log(nobs))) / nobs
    return aic, sc, hq


def modified_lr(log_likelihood, previous_log_likelihood, nobs, k_star):
    """ Small-sample corrected LR of lag l against l - 1; ``k_star`` regressors per equation at lag l. """
    return (nobs - k_star) / nobs * 2.0 * (log_likelihood - previous_log_likelihood)


def final_prediction_error(det_sigma, nobs, k_star, n):
    if nobs <= k_star:
        raise Parameter_Error(f'FPE needs nobs > k*, got {nobs} <= {k_star}')
    return det_sigma * ((nobs + k_star) / (nobs - k_star)) ** n


@dataclass(frozen=True)
class Lag_Selection_Row:
    lag: int
    log_likelihood: float
    lr_statistic: float
    lr_p_value: float
    fpe: float
    aic: float
    sc: float
    hq: float


@dataclass(frozen=True)
class Lag_Selection_Table:
    rows: tuple
    t_eff: int
    n: int
    det: str
    selected: tuple  # (criterion, lag) pairs

    def selected_lag(self, criterion='aic'):
        for name, lag in self.selected:
            if name == criterion:
                return lag
        raise Parameter_Error(f'unknown criterion {criterion!r}, expected one of {CRITERIA}')

    def is_starred(self, criterion, lag):
        return self.selected_lag(criterion) == lag

    def __str__(self):
        chosen = ', '.join(f'{name}={lag}' for name, lag in self.selected)
        return f'lag selection (T={self.t_eff}, lags 0..{len(self.rows) - 1}): {chosen}'


def lag_order_select(d, max_p, det='intercept', level=0.05):
    """
    Every candidate lag 0..max_p is fitted on the sample available at max_p.
    The LR column is tested sequentially from max_p down with n² degrees of
    freedom; the first significant lag is starred (lag 0 when none is).
    """
    if max_p < 1:
        raise Parameter_Error(f'max lag must be at least 1, got {max_p}')
    n = len(d.roles)
    rows = []
    previous = None
    for lag in range(max_p + 1):
        fit = var_fit(d, lag, det, offset=max_p - lag).fit
        nobs = fit.nobs
        k_star = fit.n_regressors
        aic, sc, hq = information_criteria(fit.log_likelihood, n * k_star, nobs)
        fpe = final_prediction_error(float(linalg.det(fit.resid_cov)), nobs, k_star, n)
        if previous is None:
            lr, lr_p = math.nan, math.nan
        else:
            lr = modified_lr(fit.log_likelihood, previous, nobs, k_star)
            lr_p = float(stats.chi2.sf(lr, n * n))
        rows.append(Lag_Selection_Row(lag, fit.log_likelihood, lr, lr_p, fpe, aic, sc, hq))
        previous = fit.log_likelihood

    selected = [('lr', next((r.lag for r in reversed(rows[1:]) if r.lr_p_value < level), 0))]
    for criterion in CRITERIA[1:]:
        values = [getattr(r, criterion) for r in rows]
        selected.append((criterion, int(np.argmin(values))))  # first minimum: ties go to the smaller lag
    table = Lag_Selection_Table(tuple(rows), nobs, n, det, tuple(selected))
    logger.debug('%s', table)
    return table


# ------ causality and stability ------

def var_granger(fit, cause, effect, level=0.05):
    """ Wald test that all lags of ``cause`` are zero in the ``effect`` equation (df = p). """
    if cause not in fit.roles:
        raise Parameter_Error(f'role {cause!r} not in VAR {list(fit.roles)}')
    if fit.lag_order < 1:
        raise Parameter_Error('Granger causality needs at least one lag')
    rows = [fit.row_of(cause, lag) for lag in range(1, fit.lag_order + 1)]
    return wald_block_test(fit.fit, fit.equation_of(effect), rows, f'{cause} -> {effect}', level)


def granger_table(fit, level=0.05):
    """ (cause, effect, Test_Result) for every ordered pair of roles. """
    return [(cause, effect, var_granger(fit, cause, effect, level))
            for effect in fit.roles for cause in fit.roles if cause != effect]


def companion_matrix(fit):
    n, p = len(fit.roles), fit.lag_order
    companion = np.zeros((n * p, n * p))
    companion[:n] = np.hstack(list(fit.lag_matrices()))
    companion[n:, :-n] = np.eye(n * (p - 1))
    return companion


def stability(fit):
    """ Companion eigenvalue moduli, descending; the VAR is stable when all are below 1. """
    if fit.lag_order == 0:
        return np.empty(0)
    moduli = np.abs(linalg.eigvals(companion_matrix(fit)))
    return np.sort(moduli)[::-1]


def is_stable(fit):
    moduli = stability(fit)
    return bool(moduli.size == 0 or moduli[0] < 1.0)
