# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import pytest

from coint_causality.critical_values import CRITICAL_VALUES, level_key
from coint_causality.errors import Parameter_Error


def test_unit_root_values():
    assert CRITICAL_VALUES.adf('intercept') == -2.94
    assert CRITICAL_VALUES.adf('intercept_trend') == -3.53
    assert CRITICAL_VALUES.kpss('intercept') == 0.46
    assert CRITICAL_VALUES.kpss('intercept_trend') == 0.146
    assert CRITICAL_VALUES.perron('both', replication=True) == -5.23
    assert CRITICAL_VALUES.perron('intercept_break') == -5.23


def test_johansen_values():
    trace = [CRITICAL_VALUES.johansen_trace(4 - r) for r in range(4)]
    maxeig = [CRITICAL_VALUES.johansen_maxeig(4 - r) for r in range(4)]
    assert trace == [47.85613, 29.79707, 15.49471, 3.841466]
    assert maxeig == [27.58434, 21.13162, 14.26460, 3.841466]


def test_johansen_values_beyond_the_compiled_table():
    # five variables and the other deterministic cases come from statsmodels
    assert CRITICAL_VALUES.johansen_trace(5) > CRITICAL_VALUES.johansen_trace(4)
    assert CRITICAL_VALUES.johansen_trace(1, 'trend') > 0
    assert CRITICAL_VALUES.johansen_maxeig(2, 'none') < CRITICAL_VALUES.johansen_maxeig(2)


def test_bai_perron_values():
    assert [CRITICAL_VALUES.bai_perron(4, l) for l in range(1, 5)] == [16.19, 18.11, 18.93, 19.64]
    with pytest.raises(Parameter_Error):
        CRITICAL_VALUES.bai_perron(4, 1, 0.01)
