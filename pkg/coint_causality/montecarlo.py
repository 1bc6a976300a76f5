# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Size harness: rejection rates of the tests under their null hypotheses. Each
replication draws from its own generator, spawned from one SeedSequence, so a
study gives the same rates whatever the number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from coint_causality.breaks import Break_Model, supf_test
from coint_causality.core import Dataset, Series, ols_fit
from coint_causality.diagnostics import breusch_godfrey, jarque_bera, white_test
from coint_causality.errors import Parameter_Error
from coint_causality.report import Report_Table
from coint_causality.unitroot import adf_test, kpss_test
from coint_causality.var import var_fit, var_granger

logger = logging.getLogger(__name__)

BURN_IN = 50


def _random_walk_adf(rng, nobs, level):
    y = np.cumsum(rng.standard_normal(nobs))
    return adf_test(Series('y', 1, y), 'intercept', level=level).rejected


def _white_noise_kpss(rng, nobs, level):
    return kpss_test(Series('y', 1, rng.standard_normal(nobs)), 'intercept', level=level).rejected


def _static_regression(rng, nobs):
    x = rng.standard_normal(nobs)
    y = 1.0 + 0.5 * x + rng.standard_normal(nobs)
    return ols_fit(y, np.column_stack([np.ones(nobs), x]), ('const', 'x'))


def _breusch_godfrey(rng, nobs, level):
    return breusch_godfrey(_static_regression(rng, nobs), 1, level=level).rejected


def _white(rng, nobs, level):
    return white_test(_static_regression(rng, nobs), level=level).rejected


def _jarque_bera(rng, nobs, level):
    return jarque_bera(rng.standard_normal(nobs), level).rejected


def _var_granger(rng, nobs, level):
    # Y does not depend on lagged X
    e = rng.standard_normal((nobs + BURN_IN, 2))
    z = np.zeros((nobs + BURN_IN, 2))
    for t in range(1, nobs + BURN_IN):
        z[t, 0] = 0.5 * z[t - 1, 0] + e[t, 0]
        z[t, 1] = 0.3 * z[t - 1, 0] + 0.4 * z[t - 1, 1] + e[t, 1]
    z = z[BURN_IN:]
    d = Dataset((('Y', Series('Y', 1, z[:, 0])), ('X', Series('X', 1, z[:, 1]))), (1, nobs))
    return var_granger(var_fit(d, 1), 'X', 'Y', level).rejected


def _supf(rng, nobs, level):
    m = Break_Model(1.0 + rng.standard_normal(nobs), np.ones((nobs, 1)), 0.15, 1)
    return supf_test(m, 0, level).rejected


NULL_MODELS = {
    'adf': _random_walk_adf,
    'kpss': _white_noise_kpss,
    'bg': _breusch_godfrey,
    'white': _white,
    'jb': _jarque_bera,
    'var_granger': _var_granger,
    'supf': _supf,
}


@dataclass(frozen=True)
class Size_Result:
    test: str
    nobs: int
    replications: int
    level: float
    rejections: int

    @property
    def rate(self):
        return self.rejections / self.replications

    def within(self, tolerance=0.02):
        return abs(self.rate - self.level) <= tolerance

    def __str__(self):
        return f'{self.test}: {self.rate:.4f} rejected at {self.level} (T={self.nobs}, {self.replications} reps)'


def replication_seeds(seed, replications):
    return np.random.SeedSequence(seed).spawn(replications)


def _replicate(job):
    test, seed, nobs, level = job
    return NULL_MODELS[test](np.random.default_rng(seed), nobs, level)


def rejection_rate(test, nobs=200, replications=2000, seed=12345, level=0.05, workers=1):
    if test not in NULL_MODELS:
        raise Parameter_Error(f'unknown test {test!r}, expected one of {sorted(NULL_MODELS)}')
    if replications < 1:
        raise Parameter_Error(f'replications must be positive, got {replications}')
    jobs = [(test, child, nobs, level) for child in replication_seeds(seed, replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_replicate, jobs, chunksize=max(1, replications // (4 * workers))))
    else:
        outcomes = [_replicate(job) for job in jobs]
    result = Size_Result(test, nobs, replications, level, int(sum(outcomes)))
    logger.info('%s', result)
    return result


def size_study(tests=tuple(NULL_MODELS), nobs=200, replications=2000, seed=12345, level=0.05, workers=1):
    """ One rejection rate per test; test i uses the seed ``seed + i``. """
    return [rejection_rate(test, nobs, replications, seed + i, level, workers) for i, test in enumerate(tests)]


def size_table(results):
    rows = tuple((r.test, r.nobs, r.replications, r.level, r.rejections, r.rate) for r in results)
    return Report_Table('montecarlo_size', 0, 'montecarlo', 'Rejection rates under the null',
                        ('test', 'nobs', 'replications', 'level', 'rejections', 'rate'), rows)
