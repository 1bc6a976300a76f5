# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import pytest

from coint_causality.errors import Parameter_Error
from coint_causality.montecarlo import NULL_MODELS, rejection_rate, size_study, size_table


def test_rates_do_not_depend_on_workers():
    serial = rejection_rate('white', nobs=60, replications=40, seed=7)
    parallel = rejection_rate('white', nobs=60, replications=40, seed=7, workers=2)
    assert serial == parallel


def test_study_and_table():
    results = size_study(('jb', 'kpss'), nobs=40, replications=10, seed=1)
    assert [r.test for r in results] == ['jb', 'kpss']
    assert results[0] == rejection_rate('jb', 40, 10, seed=1)
    assert results[1] == rejection_rate('kpss', 40, 10, seed=2)
    table = size_table(results)
    assert table.name == 'montecarlo_size'
    assert table.column('replications') == [10, 10]
    assert all(0.0 <= rate <= 1.0 for rate in table.column('rate'))


def test_argument_checks():
    with pytest.raises(Parameter_Error):
        rejection_rate('dw')
    with pytest.raises(Parameter_Error):
        rejection_rate('jb', replications=0)


@pytest.mark.slow
@pytest.mark.parametrize('test', [t for t in NULL_MODELS if t != 'supf'])
def test_size_at_five_percent(test):
    result = rejection_rate(test, nobs=200, replications=2000, seed=12345)
    assert result.within(0.02), str(result)


@pytest.mark.parametrize('test', ['adf', 'kpss'])
def test_unit_root_size_in_a_short_study(test):
    result = rejection_rate(test, nobs=100, replications=400, seed=2023)
    assert result.within(0.03), str(result)
