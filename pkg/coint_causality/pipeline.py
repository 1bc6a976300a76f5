# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
The per-equation workflow: unit roots, structural breaks, lag selection,
Johansen, then a VECM when the trace test finds cointegration and a levels VAR
when it does not, Granger causality on whichever was fitted, and residual
diagnostics. Equations run concurrently; their tables are merged in equation
order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from coint_causality import __version__
from coint_causality.breaks import Break_Model, sequential_breaks
from coint_causality.coint import johansen_test, vecm_fit, vecm_granger_table
from coint_causality.config import EQUATIONS
from coint_causality.diagnostics import diagnose
from coint_causality.errors import Coint_Error
from coint_causality.ingest import SNAPSHOT, load_csv, load_snapshot, snapshot_validate
from coint_causality.report import Analysis_Report, Report_Table, Stage_Error
from coint_causality.unitroot import PERRON_MODELS, perron_test, unit_root_table
from coint_causality.var import CRITERIA, LEVELS_CAVEAT, granger_table, lag_order_select, stability, var_fit

logger = logging.getLogger(__name__)


@dataclass
class Equation_Report:
    equation: int
    roles: tuple
    unit_roots: Optional[object] = None
    perron_alternatives: tuple = ()
    breaks: Optional[object] = None
    lag_selection: Optional[object] = None
    lag_order: Optional[int] = None
    johansen: Optional[object] = None
    vecm: Optional[object] = None
    vecm_granger: Optional[list] = None
    var: Optional[object] = None
    var_granger: Optional[list] = None
    stability: Optional[np.ndarray] = None
    diagnostics: Optional[object] = None
    notes: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def path(self):
        if self.vecm is not None:
            return 'vecm'
        if self.var is not None:
            return 'var'
        return None

    def note(self, text, warn=False):
        self.notes.append(text)
        if warn:
            logger.warning('eq%d: %s', self.equation, text)
        else:
            logger.info('eq%d: %s', self.equation, text)


def static_regressors(d, roles):
    """ Intercept and the right-hand-side roles of TRADE = f(...), with labels. """
    X = np.column_stack([np.ones(len(d)), d.matrix(roles[1:])])
    return X, ('const', *roles[1:])


# ------ stages ------

def unit_root_stage(entry, d, cfg):
    entry.unit_roots = unit_root_table(d, cfg.level, cfg.perron_model, cfg.trimming, cfg.replicate)
    for verdict in entry.unit_roots.verdicts:
        if verdict.order != 'I1':
            entry.note(f'{verdict.series} is {verdict.order}, not I1; cointegration analysis assumes I1 variables',
                       warn=True)
        elif not verdict.kpss_agrees:
            entry.note(f'{verdict.series}: KPSS disagrees with the ADF verdict I1')
    alternatives = []
    for role in d.roles:
        main = entry.unit_roots.of('PERRON', role)[0]
        for model in PERRON_MODELS:
            if model == cfg.perron_model:
                continue
            alternative = perron_test(d.series(role), model, cfg.trimming, level=cfg.level)
            alternatives.append(alternative)
            if alternative.rejected != main.rejected:
                entry.note(f'Perron decision on {role} changes under the {model} model '
                           f'({alternative.decision} vs {main.decision})', warn=True)
    entry.perron_alternatives = tuple(alternatives)


def break_stage(entry, d, cfg):
    X, labels = static_regressors(d, entry.roles)
    model = Break_Model(d.series(entry.roles[0]).values, X, cfg.trimming, cfg.max_breaks, d.years, labels)
    entry.breaks = sequential_breaks(model, cfg.level)


def lag_stage(entry, d, cfg):
    entry.lag_selection = lag_order_select(d, cfg.max_lag_for(entry.equation), 'intercept', cfg.level)
    p = entry.lag_selection.selected_lag(cfg.criterion)
    if p == 0:
        entry.note(f'{cfg.criterion.upper()} selects lag 0; lag 1 is used')
        p = 1
    entry.lag_order = p


def johansen_stage(entry, d, cfg):
    entry.johansen = johansen_test(d, entry.lag_order, cfg.det_case, cfg.level)
    if not entry.johansen.ranks_agree:
        entry.note(f'trace rank {entry.johansen.selected_rank} and max-eigen rank '
                   f'{entry.johansen.maxeig_rank} differ; the trace rank is used', warn=True)


def vecm_stage(entry, d, cfg):
    johansen = entry.johansen
    # the rank and vectors come from the levels lag p; the difference lags follow cfg.diff_lags
    entry.vecm = vecm_fit(d, johansen.lag_order, johansen.selected_rank, cfg.det_case,
                          diff_lags=cfg.diff_lags_for(johansen.lag_order), ect_count=cfg.ect_count, johansen=johansen)
    if entry.vecm.ect_count < johansen.selected_rank:
        entry.note(f'{entry.vecm.ect_count} of {johansen.selected_rank} error-correction terms enter the VECM')
    entry.vecm_granger = vecm_granger_table(entry.vecm, cfg.level)


def var_stage(entry, d, cfg):
    entry.var = var_fit(d, entry.lag_order, 'intercept')
    entry.var_granger = granger_table(entry.var, cfg.level)
    entry.stability = stability(entry.var)
    if entry.stability.size and entry.stability[0] >= 1.0:
        entry.note(f'VAR({entry.lag_order}) is not stable (largest root modulus {entry.stability[0]:.4f})', warn=True)
    entry.note(LEVELS_CAVEAT)


def diagnostics_stage(entry, d, cfg):
    fit = entry.vecm.fit if entry.vecm is not None else entry.var.fit
    X, labels = static_regressors(d, entry.roles)
    entry.diagnostics = diagnose(fit, X, labels, 0, cfg.bg_lags, cfg.reset_power, cfg.white_cross_terms, cfg.level,
                                 white_fallback=cfg.white_fallback)
    for text in entry.diagnostics.notes:
        entry.note(text)


def run_equation(d, equation, cfg):
    """ All stages for one equation; the first failing stage ends it with a Stage_Error. """
    roles = EQUATIONS[equation]
    entry = Equation_Report(equation, roles)
    sub = d.select(roles)
    stages = [('unit_roots', unit_root_stage), ('breaks', break_stage), ('lag_selection', lag_stage),
              ('johansen', johansen_stage)]
    for name, stage in stages:
        if not _run_stage(entry, name, stage, sub, cfg):
            return entry
    # the branch depends on the trace rank only
    if entry.johansen.selected_rank > 0:
        branch = ('vecm', vecm_stage)
    else:
        branch = ('var', var_stage)
    for name, stage in (branch, ('diagnostics', diagnostics_stage)):
        if not _run_stage(entry, name, stage, sub, cfg):
            return entry
    return entry


def _run_stage(entry, name, stage, d, cfg):
    logger.info('eq%d: %s', entry.equation, name)
    try:
        stage(entry, d, cfg)
    except Coint_Error as error:
        logger.error('eq%d: %s failed: %s', entry.equation, name, error)
        entry.errors.append(Stage_Error(entry.equation, name, type(error).__name__, str(error)))
        return False
    return True


def load_data(cfg):
    """ (dataset, data description, snapshot notes). """
    if cfg.data is None:
        d = load_snapshot()
        validation = snapshot_validate(d)
        notes = [f'snapshot check failed: {c.name} = {c.observed}, expected {c.expected}'
                 for c in validation.failures()]
        notes.append('bundled data is a reconstructed snapshot, not the original data vintage')
        return d, f'bundled {SNAPSHOT}', notes
    return load_csv(cfg.data), str(cfg.data), []


def run_pipeline(cfg, d=None):
    """ Validate, load, run every configured equation and assemble the report. """
    cfg = cfg.validate().pinned()
    if d is None:
        d, source, data_notes = load_data(cfg)
    else:
        source, data_notes = 'in-memory dataset', []
    logger.info('pipeline: equations %s on %s (%d-%d)', list(cfg.equations), source, *d.sample)
    equations = sorted(set(cfg.equations))
    workers = min(cfg.workers, len(equations))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {eq: executor.submit(run_equation, d, eq, cfg) for eq in equations}
            entries = [futures[eq].result() for eq in equations]
    else:
        entries = [run_equation(d, eq, cfg) for eq in equations]
    tables = []
    for entry in entries:
        tables.extend(equation_tables(entry))
    metadata = (('package', f'coint_causality {__version__}'), ('data', source),
                ('sample', f'{d.sample[0]}-{d.sample[1]}'),
                *((f'config.{key}', str(value)) for key, value in cfg.echo()))
    notes = [(0, text) for text in data_notes]
    notes += [(entry.equation, text) for entry in entries for text in entry.notes]
    errors = tuple(error for entry in entries for error in entry.errors)
    return Analysis_Report(tuple(tables), metadata, tuple(notes), errors, tuple(entries))


# ------ tables ------

def _test_cells(test):
    return (test.statistic, ', '.join(str(x) for x in test.df), test.p_value, test.decision)


def _coefficient_rows(fit):
    se, t, p = fit.standard_errors, fit.t_ratios, fit.p_values
    return tuple((equation, label, fit.coefficients[r, i], se[r, i], t[r, i], p[r, i])
                 for i, equation in enumerate(fit.equation_labels)
                 for r, label in enumerate(fit.column_labels))


_COEFFICIENT_COLUMNS = ('equation', 'regressor', 'coefficient', 'std_error', 't_ratio', 'p_value')
_HYPOTHESES = ('None', 'At most 1', 'At most 2', 'At most 3', 'At most 4', 'At most 5')


def equation_tables(entry):
    n = entry.equation

    def table(suffix, kind, title, columns, rows, precision=4):
        return Report_Table(f'eq{n}_{suffix}', n, kind, f'Equation ({n}): {title}', columns, tuple(rows), precision)

    tables = []
    if entry.unit_roots is not None:
        results = (*entry.unit_roots.results, *entry.perron_alternatives)
        tables.append(table('unit_roots', 'unit_root', 'unit-root tests',
                            ('series', 'test', 'deterministic', 'model', 'statistic', 'critical_value', 'p_value',
                             'lags', 'nobs', 'break_year', 'decision', 'note'),
                            [(r.series, r.test_name, r.deterministic, r.model, r.statistic, r.critical_value,
                              r.p_value, r.lags_used, r.nobs, r.break_year, r.decision, r.note) for r in results]))
        tables.append(table('integration', 'integration', 'order of integration',
                            ('series', 'order', 'kpss_agrees'),
                            [(v.series, v.order, v.kpss_agrees) for v in entry.unit_roots.verdicts]))
    if entry.breaks is not None:
        tables.append(table('breaks', 'breaks', 'sequential break tests',
                            ('test', 'statistic', 'critical_value', 'decision'),
                            [(t.name, t.statistic, t.critical_value, t.decision) for t in entry.breaks.tests], 2))
        tables.append(table('break_dates', 'breaks', 'break dates',
                            ('break', 'year'), [(i + 1, year) for i, year in enumerate(entry.breaks.break_years)]))
    if entry.lag_selection is not None:
        ls = entry.lag_selection
        tables.append(table('lag_selection', 'lag_selection', f'VAR lag order selection (T = {ls.t_eff})',
                            ('lag', 'logL', 'LR', 'LR_p', 'FPE', 'AIC', 'SC', 'HQ', 'selected_by'),
                            [(row.lag, row.log_likelihood, row.lr_statistic, row.lr_p_value, row.fpe, row.aic,
                              row.sc, row.hq, ' '.join(c for c in CRITERIA if ls.is_starred(c, row.lag)))
                             for row in ls.rows], 6))
    if entry.johansen is not None:
        j = entry.johansen
        tables.append(table('johansen', 'johansen', f'Johansen cointegration test (rank {j.selected_rank})',
                            ('hypothesis', 'eigenvalue', 'trace', 'trace_cv', 'maxeig', 'maxeig_cv'),
                            [(_HYPOTHESES[r], j.eigenvalues[r], trace, trace_cv, maxeig, maxeig_cv)
                             for r, trace, trace_cv, maxeig, maxeig_cv in j.rows()], 5))
    if entry.vecm is not None:
        v = entry.vecm
        tables.append(table('vecm', 'vecm', f'VECM with {v.ect_count} error-correction term(s)',
                            _COEFFICIENT_COLUMNS, _coefficient_rows(v.fit)))
        columns = ('role', *(f'CE{j + 1}' for j in range(v.ect_count)))
        rows = [(role, *v.beta[i]) for i, role in enumerate(v.roles)]
        rows.append(('const', *(-c for c in v.long_run_constants)))
        tables.append(table('cointegrating_vectors', 'vecm', 'normalised cointegrating vectors', columns, rows))
        tables.append(table('vecm_granger', 'causality', 'VEC Granger causality (short run)',
                            ('effect', 'cause', 'chi2', 'df', 'p_value', 'decision'),
                            [(effect, cause, *_test_cells(short)) for cause, effect, short, _ in entry.vecm_granger]))
        long_run = {effect: long for _, effect, _, long in entry.vecm_granger if long is not None}
        tables.append(table('long_run', 'causality', 'long-run causality (error-correction terms)',
                            ('effect', 'distribution', 'statistic', 'df', 'p_value', 'decision'),
                            [(effect, test.distribution, *_test_cells(test)) for effect, test in long_run.items()]))
    if entry.var is not None:
        tables.append(table('var', 'var', f'VAR({entry.var.lag_order}) in levels',
                            _COEFFICIENT_COLUMNS, _coefficient_rows(entry.var.fit)))
        tables.append(table('var_granger', 'causality', 'VAR Granger causality',
                            ('effect', 'cause', 'chi2', 'df', 'p_value', 'decision'),
                            [(effect, cause, *_test_cells(test)) for cause, effect, test in entry.var_granger]))
        tables.append(table('stability', 'var', 'VAR stability (companion root moduli)',
                            ('root', 'modulus'), [(i + 1, m) for i, m in enumerate(entry.stability)]))
    if entry.diagnostics is not None:
        diag = entry.diagnostics
        tables.append(table('diagnostics', 'diagnostics', f'residual diagnostics ({diag.equation})',
                            ('test', 'distribution', 'statistic', 'df', 'p_value', 'decision', 'note'),
                            [(t.name, t.distribution, *_test_cells(t), t.note) for t in diag.tests()]))
        tables.append(table('vif', 'diagnostics', 'variance inflation factors',
                            ('regressor', 'vif'), list(diag.vif.items()), 2))
        tables.append(table('verdicts', 'diagnostics', 'diagnostic verdicts',
                            ('test', 'verdict'), list(diag.verdicts.items())))
    return tables
