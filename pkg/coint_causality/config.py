# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Pipeline configuration. Config files are line-oriented ``key = value`` text with
``#`` comments; command-line flags override file values, which override the
defaults below.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from coint_causality.coint import DET_CASES
from coint_causality.errors import Config_Error
from coint_causality.unitroot import PERRON_MODELS

logger = logging.getLogger(__name__)

# TRADE = f(financial development measure, LGDP, REER)
EQUATIONS = {
    1: ('TRADE', 'FD', 'LGDP', 'REER'),
    2: ('TRADE', 'FID', 'LGDP', 'REER'),
    3: ('TRADE', 'FMD', 'LGDP', 'REER'),
}
REPLICATION_MAX_LAG = {1: 5, 2: 4, 3: 5}
DEFAULT_MAX_LAG = 5
FORMATS = ('md', 'csv', 'json')
DIFF_LAGS = ('levels', 'levels_minus_one')
LAG_CRITERIA = ('aic', 'sc', 'hq', 'fpe', 'lr')


@dataclass(frozen=True)
class Pipeline_Config:
    data: Optional[str] = None  # None: bundled snapshot
    equations: tuple = (1, 2, 3)
    det_case: str = 'constant'
    max_lag: Optional[int] = None
    criterion: str = 'aic'
    trimming: float = 0.15
    max_breaks: int = 5
    level: float = 0.05
    out: str = 'report'
    seed: int = 12345
    format: str = 'md'
    replicate: bool = False
    perron_model: str = 'both'
    diff_lags: str = 'levels_minus_one'
    ect_count: Optional[int] = None
    reset_power: int = 3
    bg_lags: tuple = (1, 2, 3, 4)
    white_cross_terms: Optional[bool] = None
    white_fallback: bool = False  # fitted-value White test when the full design does not fit
    workers: int = 3
    tables: Optional[tuple] = None
    graphs: bool = False

    def validate(self):
        unknown = [e for e in self.equations if e not in EQUATIONS]
        if unknown or not self.equations:
            raise Config_Error(f'unknown equation id(s) {unknown or list(self.equations)}; expected a subset of {sorted(EQUATIONS)}')
        if not 0 < self.level <= 0.5:
            raise Config_Error(f'level must lie in (0, 0.5], got {self.level}')
        if self.max_lag is not None and self.max_lag < 1:
            raise Config_Error(f'max_lag must be at least 1, got {self.max_lag}')
        if not 0 < self.trimming <= 0.25:
            raise Config_Error(f'trimming must lie in (0, 0.25], got {self.trimming}')
        if self.max_breaks < 1:
            raise Config_Error(f'max_breaks must be at least 1, got {self.max_breaks}')
        for key, value, allowed in (('det_case', self.det_case, DET_CASES), ('criterion', self.criterion, LAG_CRITERIA),
                                    ('format', self.format, FORMATS), ('perron_model', self.perron_model, PERRON_MODELS),
                                    ('diff_lags', self.diff_lags, DIFF_LAGS)):
            if value not in allowed:
                raise Config_Error(f'{key} must be one of {allowed}, got {value!r}')
        if self.ect_count is not None and self.ect_count < 1:
            raise Config_Error(f'ect_count must be at least 1, got {self.ect_count}')
        if self.reset_power < 2:
            raise Config_Error(f'reset_power must be at least 2, got {self.reset_power}')
        if not self.bg_lags or min(self.bg_lags) < 1:
            raise Config_Error(f'bg_lags must be positive integers, got {self.bg_lags}')
        if self.workers < 1:
            raise Config_Error(f'workers must be at least 1, got {self.workers}')
        return self

    def max_lag_for(self, equation):
        if self.max_lag is not None:
            return self.max_lag
        if self.replicate:
            return REPLICATION_MAX_LAG[equation]
        return DEFAULT_MAX_LAG

    def diff_lags_for(self, p):
        """ Lagged differences in the VECM for a levels lag order p. """
        if self.diff_lags == 'levels':
            return max(p, 1)
        return max(p - 1, 1)

    def pinned(self):
        """ The effective configuration: replication mode overrides its design choices. """
        if not self.replicate:
            return self
        return dataclasses.replace(self, criterion='aic', diff_lags='levels', ect_count=1, perron_model='both',
                                   reset_power=3, bg_lags=(1, 2, 3, 4))

    def updated(self, **overrides):
        """ Copy with every override that is not None applied. """
        values = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(values) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise Config_Error(f'unknown configuration keys: {sorted(unknown)}')
        return dataclasses.replace(self, **values)

    def echo(self):
        """ (key, value) pairs for report metadata. """
        return tuple((f.name, getattr(self, f.name)) for f in dataclasses.fields(self))


# ------ config files ------

def _boolean(text):
    lowered = text.lower()
    if lowered in ('true', 'yes', 'on', '1'):
        return True
    if lowered in ('false', 'no', 'off', '0'):
        return False
    raise ValueError(f'not a boolean: {text!r}')


def _optional(convert):
    def parse(text):
        return None if text.lower() in ('none', 'auto', '') else convert(text)
    return parse


def _int_tuple(text):
    return tuple(int(part) for part in text.split(',') if part.strip())


def _str_tuple(text):
    return tuple(part.strip() for part in text.split(',') if part.strip())


_PARSERS = {
    'data': str, 'equations': _int_tuple, 'det_case': str, 'max_lag': _optional(int), 'criterion': str,
    'trimming': float, 'max_breaks': int, 'level': float, 'out': str, 'seed': int, 'format': str,
    'replicate': _boolean, 'perron_model': str, 'diff_lags': str, 'ect_count': _optional(int),
    'reset_power': int, 'bg_lags': _int_tuple, 'white_cross_terms': _optional(_boolean), 'white_fallback': _boolean,
    'workers': int, 'tables': _optional(_str_tuple), 'graphs': _boolean,
}


def parse_config(text, source='<config>'):
    """ ``key = value`` lines to a dict of typed values. """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise Config_Error(f'{source}:{number}: expected key = value, got {line!r}')
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in _PARSERS:
            raise Config_Error(f'{source}:{number}: unknown key {key!r}')
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as error:
            raise Config_Error(f'{source}:{number}: bad value for {key}: {error}') from error
    return values


def read_config(path, base=None):
    """ Defaults (or ``base``) updated with the file's values, validated. """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as error:
        raise Config_Error(f'cannot read config {path}: {error}') from error
    values = parse_config(text, str(path))
    logger.debug('config %s: %s', path, values)
    base = base if base is not None else Pipeline_Config()
    return dataclasses.replace(base, **values).validate()
