# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Unit-root and stationarity tests: augmented Dickey-Fuller with Schwarz lag
selection and KPSS with a Bartlett-window long-run variance (both estimated by
statsmodels, decided against the compiled critical values), and the Perron
innovational-outlier test with an endogenous break date.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from statsmodels.tools.sm_exceptions import InterpolationWarning
from statsmodels.tsa.stattools import adfuller, kpss

from coint_causality.core import diff, system_ols
from coint_causality.critical_values import CRITICAL_VALUES
from coint_causality.errors import Degenerate_Input_Error, Insufficient_Data_Error, Parameter_Error, Singular_Matrix_Error

logger = logging.getLogger(__name__)

UNIT_ROOT_SPECS = ('intercept', 'intercept_trend')
_REGRESSION = {'intercept': 'c', 'intercept_trend': 'ct'}
PERRON_MODELS = ('intercept_break', 'trend_break', 'both')
PERRON_LAG_T = 1.645  # |t| on the last augmentation lag that keeps it


@dataclass(frozen=True)
class Unit_Root_Result:
    test_name: str
    deterministic: str
    statistic: float
    critical_value: float
    lags_used: int
    nobs: int
    series: str = ''
    level: float = 0.05
    break_year: Optional[int] = None
    p_value: Optional[float] = None
    model: Optional[str] = None
    note: str = ''

    def __post_init__(self):
        if (self.break_year is not None) != (self.test_name == 'PERRON'):
            raise Parameter_Error('break_year is reported by the Perron test only')

    @property
    def rejected(self):
        if self.test_name == 'KPSS':
            return self.statistic > self.critical_value
        return self.statistic < self.critical_value

    @property
    def decision(self):
        return 'reject_null' if self.rejected else 'fail_to_reject'

    def __str__(self):
        where = f', break {self.break_year}' if self.break_year is not None else ''
        return (f'{self.test_name}[{self.deterministic}] {self.series}: {self.statistic:.4f} '
                f'(cv {self.critical_value:.4f}, lags {self.lags_used}{where}) -> {self.decision}')


def default_max_lags(nobs):
    return int(math.floor(12.0 * (nobs / 100.0) ** 0.25))


def default_bandwidth(nobs):
    return int(math.floor(4.0 * (nobs / 100.0) ** 0.25))


def _check_spec(det):
    if det not in UNIT_ROOT_SPECS:
        raise Parameter_Error(f'deterministic spec must be one of {UNIT_ROOT_SPECS}, got {det!r}')


# ------ ADF ------

def adf_test(s, det='intercept', max_lags=None, level=0.05):
    """
    Lags chosen by the Schwarz criterion on the sample common to 0..max_lags,
    then re-estimated on the full sample. The decision uses the compiled
    critical value; the MacKinnon p-value is reported alongside.
    """
    _check_spec(det)
    max_lags = default_max_lags(len(s)) if max_lags is None else int(max_lags)
    if max_lags < 0:
        raise Parameter_Error(f'max_lags must be non-negative, got {max_lags}')
    if len(s) < max_lags + 10:
        raise Insufficient_Data_Error(f'ADF on {s.name!r} needs {max_lags + 10} observations, has {len(s)}')
    try:
        statistic, p_value, lags, nobs, _, _ = adfuller(s.values, maxlag=max_lags, regression=_REGRESSION[det],
                                                        autolag='BIC')
    except ValueError as error:
        raise Degenerate_Input_Error(f'ADF on {s.name!r}: {error}') from error
    critical = CRITICAL_VALUES.adf(det, level)
    logger.debug('adf %s [%s]: lags=%d nobs=%d t=%.4f p=%.4f', s.name, det, lags, nobs, statistic, p_value)
    return Unit_Root_Result('ADF', det, float(statistic), critical, int(lags), int(nobs), s.name, level,
                            p_value=float(p_value))


# ------ KPSS ------

def kpss_test(s, det='intercept', bandwidth=None, level=0.05):
    _check_spec(det)
    if len(s) < 20:
        raise Insufficient_Data_Error(f'KPSS on {s.name!r} needs 20 observations, has {len(s)}')
    nobs = len(s)
    bandwidth = default_bandwidth(nobs) if bandwidth is None else int(bandwidth)
    if np.ptp(s.values) == 0:
        raise Degenerate_Input_Error(f'long-run variance of {s.name!r} is zero (constant series)')
    with warnings.catch_warnings(), np.errstate(divide='ignore', invalid='ignore'):
        # p-values outside the tabulated range are clipped to [0.01, 0.10]
        warnings.simplefilter('ignore', InterpolationWarning)
        statistic, p_value, _, _ = kpss(s.values, regression=_REGRESSION[det], nlags=bandwidth)
    if not math.isfinite(statistic):
        raise Degenerate_Input_Error(f'long-run variance of {s.name!r} is zero after detrending')
    critical = CRITICAL_VALUES.kpss(det, level)
    logger.debug('kpss %s [%s]: bandwidth=%d stat=%.4f', s.name, det, bandwidth, statistic)
    return Unit_Root_Result('KPSS', det, float(statistic), critical, bandwidth, nobs, s.name, level,
                            p_value=float(p_value))


# ------ Perron ------

def _break_columns(model, periods, tb):
    """ DU, DT and the one-time D(Tb) dummy for a break after index ``tb``. """
    columns, labels = [], []
    if model in ('intercept_break', 'both'):
        columns.append((periods > tb).astype(float))
        labels.append('DU')
    if model in ('trend_break', 'both'):
        columns.append(np.where(periods > tb, periods - tb, 0).astype(float))
        labels.append('DT')
    if model in ('intercept_break', 'both'):
        columns.append((periods == tb + 1).astype(float))
        labels.append('D(Tb)')
    return columns, labels


def _perron_regression(y, tb, model, lags):
    dy = np.diff(y)
    rows = np.arange(lags, dy.size)
    periods = rows + 1  # index of t in y
    columns = [np.ones(rows.size), periods.astype(float)]
    labels = ['const', 'trend']
    break_columns, break_labels = _break_columns(model, periods, tb)
    columns += break_columns + [y[rows]] + [dy[rows - j] for j in range(1, lags + 1)]
    labels += break_labels + ['y.L1'] + [f'Δy.L{j}' for j in range(1, lags + 1)]
    fit = system_ols(dy[rows], np.column_stack(columns), labels, ('Δy',))
    return fit, labels.index('y.L1')


def _perron_at(y, tb, model, max_lags, lags):
    """ t-ratio on y_{t-1} at break index ``tb``; lags by general-to-specific t-significance. """
    if lags is not None:
        fit, at = _perron_regression(y, tb, model, lags)
        return float(fit.t_ratios[at, 0]), lags
    for k in range(max_lags, -1, -1):
        fit, at = _perron_regression(y, tb, model, k)
        if k == 0 or abs(fit.t_ratios[-1, 0]) > PERRON_LAG_T:
            return float(fit.t_ratios[at, 0]), k
    raise AssertionError('unreachable')


def _perron_window(nobs, trimming):
    first = int(math.ceil(trimming * nobs))
    last = nobs - first - 1
    return first, last


def perron_test(s, model='both', trimming=0.15, max_lags=None, lags=None, candidates=None,
                level=0.05, replicate=False):
    """
    Minimum over candidate break dates of the unit-root t-ratio in the
    innovational-outlier regression. ``candidates`` (years) overrides the trimmed
    search range; ``lags`` fixes the augmentation instead of selecting it.
    """
    if model not in PERRON_MODELS:
        raise Parameter_Error(f'Perron model must be one of {PERRON_MODELS}, got {model!r}')
    if not 0 < trimming <= 0.25:
        raise Parameter_Error(f'trimming must lie in (0, 0.25], got {trimming}')
    nobs = len(s)
    if nobs < 25:
        raise Insufficient_Data_Error(f'Perron test on {s.name!r} needs 25 observations, has {nobs}')
    first, last = _perron_window(nobs, trimming)
    if candidates is None:
        indices = list(range(first, last + 1))
    else:
        indices = [int(year) - s.start_year for year in candidates]
        if any(not 1 <= i <= nobs - 3 for i in indices):
            raise Parameter_Error(f'candidate break years must lie inside {s.start_year + 1}-{s.end_year - 2}')
    if not indices:
        raise Parameter_Error(f'no feasible break dates for n={nobs} at trimming {trimming}')
    max_lags = default_max_lags(nobs) if max_lags is None else int(max_lags)
    # every candidate needs a pre-break row inside the regression sample
    max_lags = max(0, min(max_lags, min(indices) - 1))
    if lags is not None and lags > min(indices) - 1:
        raise Parameter_Error(f'{lags} lags leave no pre-break observations at the earliest candidate')

    y = s.values
    best = None
    for tb in indices:
        try:
            statistic, used = _perron_at(y, tb, model, max_lags, lags)
        except Singular_Matrix_Error:
            logger.debug('perron %s: break index %d is not identified, skipped', s.name, tb)
            continue
        if best is None or statistic < best[0]:
            best = (statistic, used, tb)
    if best is None:
        raise Parameter_Error(f'no identified break date for {s.name!r}')
    statistic, used, tb = best
    critical = CRITICAL_VALUES.perron(model, level, replication=replicate)
    note = ''
    if replicate:
        model_critical = CRITICAL_VALUES.perron(model, level)
        if (statistic < critical) != (statistic < model_critical):
            note = (f'decision differs under the {model} critical value {model_critical}: '
                    f'{statistic:.3f} vs {critical}')
            logger.warning('perron %s: %s', s.name, note)
    logger.debug('perron %s [%s]: break=%d lags=%d t=%.4f', s.name, model, s.start_year + tb, used, statistic)
    return Unit_Root_Result('PERRON', 'intercept_trend', statistic, critical, used, nobs - 1 - used, s.name,
                            level, break_year=s.start_year + tb, model=model, note=note)


def perron_fixed_break(s, break_year, model='both', max_lags=None, lags=None, level=0.05):
    """ The Perron regression at one known break date. """
    return perron_test(s, model, max_lags=max_lags, lags=lags, candidates=[break_year], level=level)


# ------ integration order ------

@dataclass(frozen=True)
class Integration_Verdict:
    series: str
    order: str
    adf_level: Unit_Root_Result
    adf_difference: Unit_Root_Result
    kpss_level: Unit_Root_Result
    kpss_difference: Unit_Root_Result
    kpss_agrees: bool

    def __str__(self):
        flag = '' if self.kpss_agrees else ' (KPSS disagrees)'
        return f'{self.series}: {self.order}{flag}'


def integration_order(s, det='intercept', level=0.05):
    """ I0 when ADF rejects on the level, I1 when it rejects only on the first difference. """
    if len(s) < 25:
        raise Insufficient_Data_Error(f'integration order of {s.name!r} needs 25 observations, has {len(s)}')
    ds = diff(s)
    adf_level, adf_diff = adf_test(s, det, level=level), adf_test(ds, det, level=level)
    kpss_level, kpss_diff = kpss_test(s, det, level=level), kpss_test(ds, det, level=level)
    if adf_level.rejected:
        order = 'I0'
        agrees = not kpss_level.rejected
    elif adf_diff.rejected:
        order = 'I1'
        agrees = kpss_level.rejected and not kpss_diff.rejected
    else:
        order = 'inconclusive'
        agrees = kpss_diff.rejected
    if not agrees:
        logger.info('integration order of %s: ADF says %s, KPSS disagrees', s.name, order)
    return Integration_Verdict(s.name, order, adf_level, adf_diff, kpss_level, kpss_diff, agrees)


@dataclass(frozen=True)
class Unit_Root_Table:
    results: tuple
    verdicts: tuple

    def __iter__(self):
        return iter(self.results)

    def of(self, test_name, series):
        return [r for r in self.results if r.test_name == test_name and r.series == series]


def unit_root_table(d, level=0.05, perron_model='both', trimming=0.15, replicate=False):
    """ ADF and KPSS under both specs and Perron, on levels and first differences of every role. """
    results, verdicts = [], []
    for role in d.roles:
        s = d.series(role)
        for series in (s, diff(s)):
            for det in UNIT_ROOT_SPECS:
                results.append(adf_test(series, det, level=level))
            for det in UNIT_ROOT_SPECS:
                results.append(kpss_test(series, det, level=level))
            results.append(perron_test(series, perron_model, trimming, level=level, replicate=replicate))
        verdicts.append(integration_order(s, level=level))
    logger.info('unit-root table: %d results for %d series', len(results), len(d.roles))
    return Unit_Root_Table(tuple(results), tuple(verdicts))
