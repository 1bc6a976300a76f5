# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import numpy as np
import pytest

from coint_causality.core import Dataset, Series
from coint_causality.ingest import load_snapshot


def make_dataset(matrix, roles, start_year=1):
    matrix = np.asarray(matrix, dtype=float)
    end_year = start_year + matrix.shape[0] - 1
    return Dataset(tuple((role, Series(role, start_year, matrix[:, j])) for j, role in enumerate(roles)),
                   (start_year, end_year))


def cointegrated_pair(rng, nobs, drift=0.0, burn_in=50):
    """ x a random walk, y = x + stationary AR(1) noise: beta = (1, -1). """
    x = np.cumsum(drift + rng.standard_normal(nobs + burn_in))
    u = np.zeros(nobs + burn_in)
    e = rng.standard_normal(nobs + burn_in)
    for t in range(1, nobs + burn_in):
        u[t] = 0.5 * u[t - 1] + e[t]
    return make_dataset(np.column_stack([x + u, x])[burn_in:], ('Y', 'X'))


# fixtures

@pytest.fixture
def rng():
    yield np.random.default_rng(20230101)


@pytest.fixture(scope='session')
def snapshot():
    yield load_snapshot()


@pytest.fixture
def random_walks(rng):
    yield make_dataset(np.cumsum(rng.standard_normal((60, 3)), axis=0), ('A', 'B', 'C'), 1960)
