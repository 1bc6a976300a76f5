# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Johansen reduced-rank cointegration tests, the vector error-correction model
and VECM-based Granger causality (short run: Wald on lagged differences; long
run: significance of the error-correction terms).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from coint_causality.core import Dataset, Series, frozen_array, lag_matrix, system_ols, t_test, wald_block_test
from coint_causality.critical_values import CRITICAL_VALUES
from coint_causality.errors import Empty_Result_Error, Normalization_Error, Parameter_Error, Singular_Matrix_Error

logger = logging.getLogger(__name__)

DET_CASES = ('none', 'constant', 'trend')
_LAG_DET = {'none': 'none', 'constant': 'intercept', 'trend': 'intercept'}


@dataclass(frozen=True, eq=False)
class Johansen_Result:
    roles: tuple
    lag_order: int
    det_case: str
    t_eff: int
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    maxeig_stats: np.ndarray
    trace_critical: np.ndarray
    maxeig_critical: np.ndarray
    selected_rank: int
    maxeig_rank: int
    beta: np.ndarray
    alpha: np.ndarray
    level: float = 0.05

    @property
    def ranks_agree(self):
        return self.selected_rank == self.maxeig_rank

    @property
    def critical_values(self):
        return self.trace_critical

    def rows(self):
        """ (hypothesis, trace, trace cv, maxeig, maxeig cv) for r = 0..n-1. """
        return [(r, float(self.trace_stats[r]), float(self.trace_critical[r]),
                 float(self.maxeig_stats[r]), float(self.maxeig_critical[r]))
                for r in range(len(self.roles))]

    def __repr__(self):
        return (f'Johansen_Result(roles={list(self.roles)}, p={self.lag_order}, det={self.det_case!r}, '
                f'rank={self.selected_rank}, maxeig_rank={self.maxeig_rank})')


def _first_rank(statistics, critical):
    for r, (stat, cv) in enumerate(zip(statistics, critical)):
        if stat < cv:
            return r
    return len(statistics)


def _residualize(Z, Z2):
    if Z2.shape[1] == 0:
        return Z
    coefficients = linalg.lstsq(Z2, Z)[0]
    return Z - Z2 @ coefficients


def _detrend(Y):
    periods = np.arange(1, Y.shape[0] + 1, dtype=float)
    X = np.column_stack([np.ones_like(periods), periods])
    return Y - X @ linalg.lstsq(X, Y)[0]


def johansen_test(d, p, det_case='constant', level=0.05):
    """
    Reduced-rank regression of Δy_t on y_{t-1} after partialling out p - 1
    lagged differences and the deterministics. Statistics use T = t_eff.
    """
    if p < 1:
        raise Parameter_Error(f'Johansen lag order must be at least 1, got {p}')
    if det_case not in DET_CASES:
        raise Parameter_Error(f'deterministic case must be one of {DET_CASES}, got {det_case!r}')
    Y = d.matrix()
    if det_case == 'trend':
        Y = _detrend(Y)
    n = Y.shape[1]
    design = lag_matrix(_dataset_like(d, Y), p - 1, _LAG_DET[det_case], differenced=True)
    t_eff = design.t_eff
    levels = Y[p - 1:-1]  # y_{t-1} for the rows of the design
    R0 = _residualize(design.targets, design.regressors)
    R1 = _residualize(levels, design.regressors)
    S00, S11, S01 = R0.T @ R0 / t_eff, R1.T @ R1 / t_eff, R0.T @ R1 / t_eff
    for name, S in (('S00', S00), ('S11', S11)):
        eigenvalues = linalg.eigvalsh(S)
        if eigenvalues[0] <= 1e-12 * max(eigenvalues[-1], 1e-300):
            raise Singular_Matrix_Error(f'moment matrix {name} is singular', d.roles)
    A = S01.T @ linalg.solve(S00, S01, assume_a='pos')
    lam, vectors = linalg.eigh((A + A.T) / 2.0, S11)
    order = np.argsort(lam)[::-1]
    lam = np.clip(lam[order], 0.0, 1.0 - 1e-15)
    beta = vectors[:, order]  # beta' S11 beta = I
    alpha = S01 @ beta
    log_terms = np.log1p(-lam)
    trace = np.array([-t_eff * log_terms[r:].sum() for r in range(n)])
    maxeig = -t_eff * log_terms
    trace_cv = np.array([CRITICAL_VALUES.johansen_trace(n - r, det_case, level) for r in range(n)])
    maxeig_cv = np.array([CRITICAL_VALUES.johansen_maxeig(n - r, det_case, level) for r in range(n)])
    rank, maxeig_rank = _first_rank(trace, trace_cv), _first_rank(maxeig, maxeig_cv)
    if rank != maxeig_rank:
        logger.warning('johansen %s: trace rank %d, max-eigen rank %d', list(d.roles), rank, maxeig_rank)
    logger.debug('johansen %s p=%d t_eff=%d eigenvalues=%s', list(d.roles), p, t_eff, np.round(lam, 6))
    return Johansen_Result(d.roles, p, det_case, t_eff, frozen_array(lam), frozen_array(trace),
                           frozen_array(maxeig), frozen_array(trace_cv), frozen_array(maxeig_cv),
                           rank, maxeig_rank, frozen_array(beta), frozen_array(alpha), level)


def _dataset_like(d, Y):
    return Dataset(tuple((role, Series(role, d.sample[0], Y[:, j])) for j, role in enumerate(d.roles)), d.sample)


def cointegrating_vectors(res, r):
    """ First r eigenvectors as columns, each scaled so its first (TRADE) element is 1. """
    n = len(res.roles)
    if r == 0:
        raise Empty_Result_Error('rank 0 has no cointegrating vectors')
    if not 1 <= r <= n:
        raise Parameter_Error(f'rank must lie in 1..{n}, got {r}')
    vectors = np.array(res.beta[:, :r])
    for j in range(r):
        pivot = vectors[0, j]
        if abs(pivot) <= 1e-12 * np.abs(vectors[:, j]).max():
            raise Normalization_Error(f'cointegrating vector {j + 1} has a zero {res.roles[0]} coefficient')
        vectors[:, j] /= pivot
    return frozen_array(vectors)


# ------ VECM ------

@dataclass(frozen=True, eq=False)
class Vecm_Fit:
    roles: tuple
    rank: int
    diff_lags: int
    det_case: str
    beta: np.ndarray
    long_run_constants: np.ndarray
    ect_series: np.ndarray
    years: np.ndarray
    fit: object
    johansen: Optional[Johansen_Result] = None

    @property
    def ect_count(self):
        return self.beta.shape[1]

    @property
    def ect_rows(self):
        return list(range(self.fit.n_regressors - self.ect_count, self.fit.n_regressors))

    @property
    def alpha(self):
        """ Adjustment speeds, n x ect_count. """
        return self.fit.coefficients[self.ect_rows].T

    @property
    def t_ratios(self):
        return self.fit.t_ratios

    @property
    def p_values(self):
        return self.fit.p_values

    @property
    def residuals(self):
        return self.fit.residuals

    @property
    def intercepts(self):
        if 'const' not in self.fit.column_labels:
            return np.zeros(len(self.roles))
        return self.fit.coefficients[self.fit.column_labels.index('const')]

    def equation_of(self, effect):
        if effect not in self.roles:
            raise Parameter_Error(f'role {effect!r} not in VECM {list(self.roles)}')
        return self.roles.index(effect)

    def short_run_rows(self, cause):
        if cause not in self.roles:
            raise Parameter_Error(f'role {cause!r} not in VECM {list(self.roles)}')
        return [self.fit.column_labels.index(f'Δ{cause}.L{lag}') for lag in range(1, self.diff_lags + 1)]

    def short_run(self, effect, cause):
        """ (lag, coefficient, p-value) of Δcause lags in the Δeffect equation. """
        eq = self.equation_of(effect)
        return [(lag, float(self.fit.coefficients[row, eq]), float(self.p_values[row, eq]))
                for lag, row in enumerate(self.short_run_rows(cause), start=1)]

    def __repr__(self):
        return (f'Vecm_Fit(roles={list(self.roles)}, rank={self.rank}, ect={self.ect_count}, '
                f'diff_lags={self.diff_lags}, nobs={self.fit.nobs})')


def vecm_fit(d, p, r, det_case='constant', diff_lags=None, ect_count=None, johansen=None, beta=None):
    """
    Δy_t on lagged differences, deterministics and the lagged error-correction
    terms (last). ``diff_lags`` defaults to p - 1; ``ect_count`` caps how many
    of the r cointegrating vectors enter. With r = 0 this is a VAR in differences.
    """
    if det_case not in DET_CASES:
        raise Parameter_Error(f'deterministic case must be one of {DET_CASES}, got {det_case!r}')
    diff_lags = p - 1 if diff_lags is None else int(diff_lags)
    if diff_lags < 1:
        raise Parameter_Error(f'the VECM needs at least one lagged difference (p={p}, diff_lags={diff_lags})')
    n = len(d.roles)
    if not 0 <= r <= n:
        raise Parameter_Error(f'rank must lie in 0..{n}, got {r}')
    used = r if ect_count is None else min(r, int(ect_count))
    if used > 0 and beta is None:
        johansen = johansen if johansen is not None else johansen_test(d, p, det_case)
        beta = cointegrating_vectors(johansen, r)
    beta = np.empty((n, 0)) if used == 0 else np.asarray(beta, dtype=float)[:, :used]

    det = 'intercept_trend' if det_case == 'trend' else _LAG_DET[det_case]
    design = lag_matrix(d, diff_lags, det, differenced=True)
    levels = d.matrix()[diff_lags:-1]  # y_{t-1}
    raw = levels @ beta
    constants = raw.mean(axis=0) if det_case != 'none' else np.zeros(used)
    ect = raw - constants
    labels = design.column_labels + tuple(f'ECT{j + 1}.L1' for j in range(used))
    fit = system_ols(design.targets, np.hstack([design.regressors, ect]), labels, design.target_labels)
    logger.debug('vecm %s: rank=%d ect=%d diff_lags=%d nobs=%d', list(d.roles), r, used, diff_lags, fit.nobs)
    return Vecm_Fit(d.roles, r, diff_lags, det_case, frozen_array(beta), frozen_array(constants),
                    frozen_array(ect), design.years, fit, johansen)


def vecm_granger(fit, cause, effect, level=0.05):
    """ (short-run Wald on Δcause lags, long-run test on the ECT terms) in the Δeffect equation. """
    eq = fit.equation_of(effect)
    short = wald_block_test(fit.fit, eq, fit.short_run_rows(cause), f'Δ{cause} -> Δ{effect}', level)
    return short, ect_test(fit, effect, level)


def ect_test(fit, effect, level=0.05):
    """ t-test on the single ECT coefficient, joint Wald (df = r) with several. """
    eq = fit.equation_of(effect)
    if fit.ect_count == 0:
        raise Empty_Result_Error('a rank-0 VECM has no error-correction term')
    if fit.ect_count == 1:
        return t_test(fit.fit, eq, fit.ect_rows[0], f'ECT -> Δ{effect}', level)
    return wald_block_test(fit.fit, eq, fit.ect_rows, f'ECT -> Δ{effect}', level)


def vecm_granger_table(fit, level=0.05):
    """ (cause, effect, short_run, long_run) for every ordered pair of roles. """
    rows = []
    for effect in fit.roles:
        long_run = ect_test(fit, effect, level) if fit.ect_count else None
        for cause in fit.roles:
            if cause != effect:
                short = wald_block_test(fit.fit, fit.equation_of(effect), fit.short_run_rows(cause),
                                        f'Δ{cause} -> Δ{effect}', level)
                rows.append((cause, effect, short, long_run))
    return rows


def telescoping_gaps(trace, maxeig):
    """ trace(r) - trace(r+1) - maxeig(r), with trace(n) = 0; zero for consistent statistics. """
    trace = np.asarray(trace, dtype=float)
    maxeig = np.asarray(maxeig, dtype=float)
    if trace.shape != maxeig.shape or trace.ndim != 1:
        raise Parameter_Error(f'trace and max-eigen columns must have equal length, got {trace.shape} and {maxeig.shape}')
    return trace - np.append(trace[1:], 0.0) - maxeig
