# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Multiple structural breaks in a linear regression where every coefficient shifts
at a break. A break index ``b`` is the last observation of the regime it closes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from coint_causality.core import Test_Result, frozen_array
from coint_causality.critical_values import CRITICAL_VALUES
from coint_causality.errors import Parameter_Error

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Break_Model:
    y: np.ndarray
    X: np.ndarray
    trimming: float = 0.15
    max_breaks: int = 5
    years: Optional[np.ndarray] = None
    column_labels: tuple = ()
    _ssr_table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        y = frozen_array(self.y, ndim=1)
        X = np.asarray(self.X, dtype=float)
        X = frozen_array(X[:, None] if X.ndim == 1 else X, ndim=2)
        if X.shape[0] != y.size:
            raise Parameter_Error(f'{y.size} observations but {X.shape[0]} regressor rows')
        if not 0 < self.trimming < 0.5:
            raise Parameter_Error(f'trimming must lie in (0, 0.5), got {self.trimming}')
        years = np.arange(y.size) if self.years is None else np.asarray(self.years, dtype=int)
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'years', years)
        object.__setattr__(self, '_ssr_table', {})
        if self.h < X.shape[1] + 1:
            raise Parameter_Error(f'minimum segment {self.h} must exceed the {X.shape[1]} regressors')

    @property
    def nobs(self):
        return self.y.size

    @property
    def q(self):
        return self.X.shape[1]

    @property
    def h(self):
        return int(math.ceil(self.trimming * self.nobs))

    @property
    def feasible_breaks(self):
        return self.nobs // self.h - 1

    def segment_ssr(self, first, last):
        """ SSR of the regression on rows first..last inclusive. """
        key = (first, last)
        if key not in self._ssr_table:
            y, X = self.y[first:last + 1], self.X[first:last + 1]
            beta = np.linalg.lstsq(X, y, rcond=None)[0]
            residuals = y - X @ beta
            self._ssr_table[key] = float(residuals @ residuals)
        return self._ssr_table[key]

    def __repr__(self):
        return f'Break_Model(nobs={self.nobs}, q={self.q}, h={self.h}, max_breaks={self.max_breaks})'


@dataclass(frozen=True)
class Break_Result:
    num_breaks: int
    break_years: tuple
    break_indices: tuple
    f_statistics: tuple
    critical_values: tuple
    segment_ssr: float
    tests: tuple = ()

    def __str__(self):
        years = ', '.join(str(y) for y in self.break_years) or 'none'
        return f'{self.num_breaks} break(s): {years} (ssr {self.segment_ssr:.4f})'


def _check_feasible(m, k):
    if k < 0:
        raise Parameter_Error(f'number of breaks must be non-negative, got {k}')
    if k > m.feasible_breaks:
        raise Parameter_Error(f'{k} breaks are infeasible with n={m.nobs} and minimum segment {m.h}')


def _optimal_partition(m, k, first, last):
    """ Minimal SSR and break indices for k breaks inside rows first..last. """
    h = m.h
    if k == 0:
        return m.segment_ssr(first, last), ()
    # best[j] = (ssr, breaks) for rows first..j with the current number of breaks
    best = {j: (m.segment_ssr(first, j), ()) for j in range(first + h - 1, last + 1)}
    for count in range(1, k + 1):
        updated = {}
        for j in range(first + (count + 1) * h - 1, last + 1):
            choice = None
            for b in range(first + count * h - 1, j - h + 1):
                ssr = best[b][0] + m.segment_ssr(b + 1, j)
                if choice is None or ssr < choice[0] - 1e-12 * max(1.0, abs(choice[0])):
                    choice = (ssr, best[b][1] + (b,))
            if choice is not None:
                updated[j] = choice
        best = updated
    if last not in best:
        raise Parameter_Error(f'{k} breaks do not fit in rows {first}-{last} with minimum segment {h}')
    return best[last]


def global_breaks(m, k):
    """ Break years and SSR of the SSR-minimising partition into k + 1 segments. """
    _check_feasible(m, k)
    ssr, indices = _optimal_partition(m, k, 0, m.nobs - 1)
    logger.debug('global partition, k=%d: breaks %s ssr=%.6f', k, indices, ssr)
    return tuple(int(m.years[i]) for i in indices), ssr


def _insert_one_break(m, indices):
    """ Smallest SSR obtainable by adding one break inside one segment of ``indices``. """
    bounds = [-1] + list(indices) + [m.nobs - 1]
    segments = [(bounds[i] + 1, bounds[i + 1]) for i in range(len(bounds) - 1)]
    base = [m.segment_ssr(a, b) for a, b in segments]
    best = None
    for i, (a, b) in enumerate(segments):
        if b - a + 1 < 2 * m.h:
            continue
        split_ssr, split = _optimal_partition(m, 1, a, b)
        total = sum(base) - base[i] + split_ssr
        if best is None or total < best[0] - 1e-12 * max(1.0, abs(best[0])):
            best = (total, tuple(sorted(indices + split)))
    return best


def supf_test(m, l, level=0.05):
    """ Sequential F(l + 1 | l): one extra break inserted into the global l-break partition. """
    if l < 0:
        raise Parameter_Error(f'l must be non-negative, got {l}')
    _check_feasible(m, l + 1)
    ssr_l, indices = _optimal_partition(m, l, 0, m.nobs - 1)
    inserted = _insert_one_break(m, indices)
    if inserted is None:
        raise Parameter_Error(f'no segment of the {l}-break partition can take another break')
    ssr_next = inserted[0]
    scale = max(1.0, float(m.y @ m.y))
    numerator = ssr_l - ssr_next
    df = m.nobs - (l + 2) * m.q
    if numerator <= 1e-12 * scale:
        statistic = 0.0
    elif ssr_next <= 0:
        statistic = math.inf
    else:
        statistic = numerator / (ssr_next / df)
    critical = CRITICAL_VALUES.bai_perron(m.q, l + 1, level)
    return Test_Result(f'F({l + 1}|{l})', float(statistic), 'supF', (m.q, l + 1), None, level, critical)


def sequential_breaks(m, level=0.05):
    """ Test l vs l + 1 for l = 0, 1, ... and stop at the first non-rejection. """
    tests = []
    num_breaks = 0
    limit = min(m.max_breaks, m.feasible_breaks)
    for l in range(limit):
        test = supf_test(m, l, level)
        tests.append(test)
        logger.debug('%s = %.4f (cv %.2f)', test.name, test.statistic, test.critical_value)
        if not test.rejected:
            break
        num_breaks = l + 1
    break_years, ssr = global_breaks(m, num_breaks)
    indices = tuple(int(np.flatnonzero(m.years == year)[0]) for year in break_years)
    logger.info('sequential breaks: %d found %s', num_breaks, list(break_years))
    return Break_Result(num_breaks, break_years, indices, tuple(t.statistic for t in tests),
                        tuple(t.critical_value for t in tests), ssr, tuple(tests))
