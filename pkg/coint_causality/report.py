# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Analysis reports: named tables of plain cells, rendered one file per table plus
an index, as markdown, csv or json. CSV and JSON cells keep full float
precision (``repr``), so reloading with read_report and rendering again gives
the same bytes.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from coint_causality.errors import Output_Error, Parse_Error
from coint_causality.pattern_set import Pattern_Set

logger = logging.getLogger(__name__)

FORMATS = {'md': 'md', 'markdown': 'md', 'csv': 'csv', 'json': 'json'}
META_TABLES = ('metadata', 'notes', 'errors')
_INTEGER = re.compile(r'^-?\d+$')


@dataclass(frozen=True)
class Report_Table:
    name: str
    equation: int
    kind: str
    title: str
    columns: tuple
    rows: tuple
    precision: int = 4

    def __post_init__(self):
        columns = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(_plain(cell) for cell in row) for row in self.rows)
        for row in rows:
            if len(row) != len(columns):
                raise Output_Error(f'table {self.name}: row of {len(row)} cells for {len(columns)} columns')
        object.__setattr__(self, 'columns', columns)
        object.__setattr__(self, 'rows', rows)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def cell(self, row, column):
        return self.rows[row][self.columns.index(column)]


@dataclass(frozen=True)
class Stage_Error:
    equation: int
    stage: str
    error: str
    message: str


@dataclass(frozen=True)
class Analysis_Report:
    tables: tuple
    metadata: tuple = ()  # (key, value) text pairs
    notes: tuple = ()  # (equation, text)
    errors: tuple = ()  # Stage_Error
    equations: tuple = field(default=(), compare=False, repr=False)

    @property
    def names(self):
        return [t.name for t in self.tables]

    def table(self, name):
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def tables_of(self, equation):
        return [t for t in self.tables if t.equation == equation]

    def errors_of(self, equation):
        return [e for e in self.errors if e.equation == equation]

    def meta(self, key):
        return dict(self.metadata)[key]

    def all_tables(self):
        """ Result tables followed by the metadata, notes and errors tables. """
        meta = (
            Report_Table('metadata', 0, 'meta', 'Run metadata', ('key', 'value'), self.metadata),
            Report_Table('notes', 0, 'meta', 'Caveats and warnings', ('equation', 'note'), self.notes),
            Report_Table('errors', 0, 'meta', 'Stage errors', ('equation', 'stage', 'error', 'message'),
                         tuple((e.equation, e.stage, e.error, e.message) for e in self.errors)),
        )
        return (*self.tables, *meta)


# ------ cells ------

def _plain(cell):
    """ Cells are None, int, float or str. """
    if cell is None or isinstance(cell, str):
        return cell
    if isinstance(cell, (bool, np.bool_)):
        return 'yes' if cell else 'no'
    if isinstance(cell, (int, np.integer)):
        return int(cell)
    if isinstance(cell, (float, np.floating)):
        return float(cell)
    if isinstance(cell, (tuple, list)):
        return ', '.join(str(_plain(c)) for c in cell)
    return str(cell)


def _text(cell):
    if cell is None:
        return ''
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


def _parse(text):
    if text == '':
        return None
    if _INTEGER.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def format_cell(cell, precision):
    if cell is None:
        return ''
    if isinstance(cell, float):
        if math.isnan(cell):
            return '-'
        if math.isinf(cell):
            return 'inf' if cell > 0 else '-inf'
        return f'{cell:.{precision}f}'
    return str(cell).replace('|', '\\|')


# ------ rendering ------

def _markdown(table):
    lines = [f'## {table.title}', '',
             '| ' + ' | '.join(table.columns) + ' |',
             '|' + '|'.join('---' for _ in table.columns) + '|']
    for row in table.rows:
        lines.append('| ' + ' | '.join(format_cell(c, table.precision) for c in row) + ' |')
    return '\n'.join(lines) + '\n'


def _csv(table):
    frame = pd.DataFrame([[_text(c) for c in row] for row in table.rows], columns=list(table.columns), dtype=object)
    return frame.to_csv(index=False, lineterminator='\n')


def _json(table):
    document = {'name': table.name, 'equation': table.equation, 'kind': table.kind, 'title': table.title,
                'precision': table.precision, 'columns': list(table.columns), 'rows': [list(r) for r in table.rows]}
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


_RENDER = {'md': _markdown, 'csv': _csv, 'json': _json}
_INDEX_COLUMNS = ('name', 'equation', 'kind', 'title', 'precision', 'file')


def _write(path, text):
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as file:
            file.write(text)
    except OSError as error:
        raise Output_Error(f'cannot write {path}: {error}') from error


def render_report(report, out, format='md', tables=None):
    """
    One file per table plus an index, written to directory ``out``. ``tables``
    are table-name patterns (exact or ``re:``); the metadata, notes and errors
    tables are always written. Returns the written paths.
    """
    try:
        ext = FORMATS[format]
    except KeyError:
        raise Output_Error(f'unknown report format {format!r}, expected one of {sorted(FORMATS)}') from None
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise Output_Error(f'cannot create output directory {out}: {error}') from error
    selection = Pattern_Set(tables)
    chosen = [t for t in report.all_tables() if t.name in META_TABLES or selection.match(t.name)]
    written, index_rows = [], []
    for table in chosen:
        path = out / f'{table.name}.{ext}'
        _write(path, _RENDER[ext](table))
        written.append(path)
        index_rows.append((table.name, table.equation, table.kind, table.title, table.precision, path.name))
    index = Report_Table('index', 0, 'index', 'Tables', _INDEX_COLUMNS, tuple(index_rows))
    index_path = out / f'index.{ext}'
    if ext == 'json':
        documents = [dict(zip(_INDEX_COLUMNS, row)) for row in index.rows]
        _write(index_path, json.dumps({'tables': documents}, sort_keys=True, indent=2, ensure_ascii=False) + '\n')
    else:
        _write(index_path, _RENDER[ext](index))
    written.append(index_path)
    logger.info('report: %d tables written to %s as %s', len(chosen), out, ext)
    return written


# ------ reloading ------

def _read_csv_table(path):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise Parse_Error(f'{path}: {error}') from error
    return tuple(frame.columns), tuple(tuple(_parse(c) for c in row) for row in frame.itertuples(index=False))


def _read_json(path):
    try:
        with open(path, encoding='utf-8') as file:
            return json.load(file)
    except (OSError, json.JSONDecodeError) as error:
        raise Parse_Error(f'{path}: {error}') from error


def read_report(directory):
    """ Reload a csv or json report written by render_report. """
    directory = Path(directory)
    if (directory / 'index.csv').exists():
        _, index = _read_csv_table(directory / 'index.csv')
        entries = [dict(zip(_INDEX_COLUMNS, row)) for row in index]
    elif (directory / 'index.json').exists():
        entries = _read_json(directory / 'index.json')['tables']
    else:
        raise Parse_Error(f'{directory}: no index.csv or index.json (markdown reports cannot be reloaded)')
    tables = []
    for entry in entries:
        path = directory / entry['file']
        if path.suffix == '.json':
            document = _read_json(path)
            columns, rows = tuple(document['columns']), tuple(tuple(r) for r in document['rows'])
        else:
            columns, rows = _read_csv_table(path)
        title = '' if entry['title'] is None else str(entry['title'])
        tables.append(Report_Table(entry['name'], int(entry['equation']), entry['kind'], title,
                                   columns, rows, int(entry['precision'])))
    by_name = {t.name: t for t in tables}
    for name in META_TABLES:
        if name not in by_name:
            raise Parse_Error(f'{directory}: report has no {name} table')
    metadata = tuple((str(k), _text(v)) for k, v in by_name['metadata'].rows)
    notes = by_name['notes'].rows
    errors = tuple(Stage_Error(*row) for row in by_name['errors'].rows)
    results = tuple(t for t in tables if t.name not in META_TABLES)
    logger.debug('read report %s: %d tables', directory, len(results))
    return Analysis_Report(results, metadata, notes, errors)
