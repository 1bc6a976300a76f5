# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
CSV ingestion of the annual series, the bundled snapshot and its sanity checks.

File layout: optional ``#`` comment lines, then the header
``year,TRADE,FD,FID,FMD,GDPPC,REER``. GDP per capita is stored raw and logged
at load time into the LGDP role.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import pandas as pd

from coint_causality.core import Dataset, Series, natural_log
from coint_causality.errors import Continuity_Error, Output_Error, Parse_Error, Schema_Error

logger = logging.getLogger(__name__)

ROLES = ('TRADE', 'FD', 'FID', 'FMD', 'LGDP', 'REER')
SNAPSHOT = 'india_1980_2019.csv'


@dataclass(frozen=True)
class Data_Schema:
    columns: tuple = ('year', 'TRADE', 'FD', 'FID', 'FMD', 'GDPPC', 'REER')
    units: tuple = (('TRADE', '% of GDP'), ('FD', 'index 0-1'), ('FID', 'index 0-1'), ('FMD', 'index 0-1'),
                    ('GDPPC', 'constant US$'), ('REER', 'index'))
    start_year: int = 1980
    end_year: int = 2019
    log_columns: tuple = (('GDPPC', 'LGDP'),)

    def role_of(self, column):
        return dict(self.log_columns).get(column, column)

    def column_of(self, role):
        return {r: c for c, r in self.log_columns}.get(role, role)


DEFAULT_SCHEMA = Data_Schema()


def _read_frame(path):
    try:
        return pd.read_csv(path, comment='#', dtype=str, keep_default_na=False, skipinitialspace=True,
                           encoding='utf-8')
    except FileNotFoundError:
        raise Parse_Error(f'{path}: no such file') from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise Parse_Error(f'{path}: {error}') from error


def _numeric(frame, column):
    """ Column as floats; the first bad cell raises with its 1-based data row. """
    values = pd.to_numeric(frame[column].str.strip(), errors='coerce')
    bad = values.isna().to_numpy()
    if bad.any():
        row = int(np.argmax(bad))
        raise Parse_Error(f'row {row + 1}, column {column}: {frame[column].iloc[row]!r} is not a number',
                          row=row + 1, column=column)
    return values.to_numpy(dtype=float)


def load_csv(path, schema=DEFAULT_SCHEMA):
    frame = _read_frame(path)
    frame.columns = [str(c).strip() for c in frame.columns]
    for column in schema.columns:
        if column not in frame.columns:
            raise Schema_Error(f'{path}: missing column {column!r}', column=column)
    years = _numeric(frame, 'year')
    if np.any(years != np.round(years)):
        raise Parse_Error(f'{path}: non-integer year', column='year')
    years = years.astype(int)
    gaps = np.flatnonzero(np.diff(years) != 1)
    if gaps.size:
        raise Continuity_Error(f'{path}: year {years[gaps[0] + 1]} follows {years[gaps[0]]}')
    keep = (years >= schema.start_year) & (years <= schema.end_year)
    if not keep.any():
        raise Continuity_Error(f'{path}: no rows inside {schema.start_year}-{schema.end_year}')
    frame, years = frame[keep].reset_index(drop=True), years[keep]
    start = int(years[0])
    variables = []
    for column in schema.columns[1:]:
        series = Series(column, start, _numeric(frame, column))
        role = schema.role_of(column)
        if role != column:
            series = natural_log(series).renamed(role)
        variables.append((role, series))
    order = [role for role in ROLES if role in dict(variables)]
    order += [role for role, _ in variables if role not in order]
    lookup = dict(variables)
    d = Dataset(tuple((role, lookup[role]) for role in order), (start, int(years[-1])))
    logger.debug('loaded %s: %s', path, d)
    return d


def write_csv(d, path, schema=DEFAULT_SCHEMA):
    """ Inverse of load_csv: logged roles are exponentiated back to their raw column. """
    data = {'year': d.years}
    for column in schema.columns[1:]:
        role = schema.role_of(column)
        if role not in d:
            continue
        values = d.series(role).values
        data[column] = np.exp(values) if role != column else values
    try:
        pd.DataFrame(data).to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    except OSError as error:
        raise Output_Error(f'cannot write {path}: {error}') from error


def bundled_snapshot_path():
    return resources.files('coint_causality') / 'data' / SNAPSHOT


def load_snapshot():
    with resources.as_file(bundled_snapshot_path()) as path:
        return load_csv(Path(path))


# ------ snapshot checks ------

@dataclass(frozen=True)
class Snapshot_Check:
    name: str
    passed: bool
    observed: str
    expected: str


@dataclass(frozen=True)
class Validation_Report:
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def __str__(self):
        return '\n'.join(f"{'ok  ' if c.passed else 'FAIL'} {c.name}: {c.observed} (expected {c.expected})"
                         for c in self.checks)


def _anchor(d, role, year, expected, tolerance):
    name = f'{role} {year}'
    if role not in d or not d.sample[0] <= year <= d.sample[1]:
        return Snapshot_Check(name, False, 'missing', f'{expected} ± {tolerance}')
    value = d.series(role).at(year)
    return Snapshot_Check(name, abs(value - expected) <= tolerance, f'{value:.4g}', f'{expected} ± {tolerance}')


def snapshot_validate(d):
    """ Report-only sanity checks of a loaded snapshot against published anchor values. """
    checks = [
        Snapshot_Check('rows', len(d) == 40 and d.sample == (1980, 2019),
                       f'{len(d)} rows, {d.sample[0]}-{d.sample[1]}', '40 rows, 1980-2019'),
        _anchor(d, 'TRADE', 1980, 15.4, 0.5),
        _anchor(d, 'TRADE', 2019, 40.01, 0.5),
    ]
    if 'TRADE' in d:
        trade = d.series('TRADE')
        peak = int(np.argmax(trade.values))
        checks.append(Snapshot_Check('TRADE peak', trade.start_year + peak == 2012 and abs(trade.values[peak] - 55.8) <= 1.0,
                                     f'{trade.values[peak]:.4g} in {trade.start_year + peak}', '55.8 ± 1.0 in 2012'))
    for role in ('FD', 'FID', 'FMD'):
        if role in d:
            values = d.series(role).values
            checks.append(Snapshot_Check(f'{role} range', bool(values.min() >= 0 and values.max() <= 1),
                                         f'[{values.min():.4g}, {values.max():.4g}]', '[0, 1]'))
        else:
            checks.append(Snapshot_Check(f'{role} range', False, 'missing', '[0, 1]'))
    report = Validation_Report(tuple(checks))
    for failure in report.failures():
        logger.warning('snapshot check failed: %s = %s, expected %s', failure.name, failure.observed, failure.expected)
    return report


def export_series(d, path):
    """ Plot-ready CSV: year and every role in dataset order. """
    frame = pd.DataFrame({'year': d.years, **{role: d.series(role).values for role in d.roles}})
    try:
        frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    except OSError as error:
        raise Output_Error(f'cannot write {path}: {error}') from error
