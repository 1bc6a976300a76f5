# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Command line: ``coint-causality <subcommand> [options]``. Every subcommand
prints its tables to the console; with ``--out`` (always for ``pipeline``) it
also writes them as files. Exit codes: 0 success, 1 bad input or
configuration, 2 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from coint_causality import __version__, errors
from coint_causality.causality_graph import causality_graph, write_dot
from coint_causality.coint import vecm_fit, vecm_granger_table
from coint_causality.config import EQUATIONS, Pipeline_Config, read_config
from coint_causality.errors import Coint_Error, Config_Error, Output_Error
from coint_causality.ingest import export_series
from coint_causality.montecarlo import NULL_MODELS, size_study, size_table
from coint_causality.pipeline import (Equation_Report, break_stage, diagnostics_stage, equation_tables,
                                      johansen_stage, lag_stage, load_data, run_equation, run_pipeline,
                                      unit_root_stage, var_stage)
from coint_causality.report import Analysis_Report, format_cell, render_report

logger = logging.getLogger(__name__)


class Argument_Parser(argparse.ArgumentParser):
    """ Usage errors exit with the validation code 1 instead of argparse's 2. """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(Config_Error.exit_code, f'{self.prog}: error: {message}\n')


def _common_options():
    common = Argument_Parser(add_help=False)
    common.add_argument('--data', help='CSV file (default: bundled snapshot)')
    common.add_argument('--config', help='key = value configuration file')
    common.add_argument('--out', help='output directory')
    common.add_argument('--seed', type=int, help='seed for Monte Carlo replications')
    common.add_argument('--level', type=float, help='significance level (default 0.05)')
    common.add_argument('--format', choices=('md', 'csv', 'json'), help='report format (default md)')
    common.add_argument('--replicate', action='store_true', default=None,
                        help='pin every design choice to the published analysis')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    common.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
    return common


def build_parser():
    common = _common_options()
    equation = Argument_Parser(add_help=False)
    equation.add_argument('--equation', type=int, default=1, choices=sorted(EQUATIONS),
                          help='equation system (default 1)')
    lags = Argument_Parser(add_help=False)
    lags.add_argument('--lags', type=int, help='VAR lag order in levels (default: selected)')

    parser = Argument_Parser(prog='coint-causality',
                             description='Cointegration and causality analysis of trade openness and financial development.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('unitroot', parents=[common, equation], help='ADF, KPSS and Perron tests')
    sub.add_parser('breaks', parents=[common, equation], help='Bai-Perron sequential break tests')
    sub.add_parser('lagselect', parents=[common, equation], help='VAR lag order selection')
    sub.add_parser('johansen', parents=[common, equation, lags], help='Johansen trace and max-eigen tests')
    vecm = sub.add_parser('vecm', parents=[common, equation, lags], help='vector error-correction model')
    vecm.add_argument('--rank', type=int, help='cointegrating rank (default: trace test)')
    sub.add_parser('var', parents=[common, equation, lags], help='VAR in levels with Granger causality')
    sub.add_parser('causality', parents=[common, equation], help='Granger causality on the selected model')
    sub.add_parser('diagnose', parents=[common, equation], help='residual diagnostics of the selected model')
    pipeline = sub.add_parser('pipeline', parents=[common], help='the full analysis for every equation')
    pipeline.add_argument('--equations', help='comma separated equation ids (default 1,2,3)')
    pipeline.add_argument('--graphs', action='store_true', default=None, help='write causality graphs as DOT')
    montecarlo = sub.add_parser('montecarlo', parents=[common], help='rejection rates under the null')
    montecarlo.add_argument('--tests', default=','.join(NULL_MODELS), help='comma separated tests')
    montecarlo.add_argument('--nobs', type=int, default=200)
    montecarlo.add_argument('--replications', type=int, default=2000)
    montecarlo.add_argument('--workers', type=int, default=1)
    sub.add_parser('export-series', parents=[common], help='plot-ready CSV of every series')
    return parser


def setup_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logging.basicConfig(level=level, format='%(message)s', datefmt='[%X]', handlers=[handler], force=True)


def make_config(args):
    """ Defaults, then the config file, then flags. """
    cfg = read_config(args.config) if args.config else Pipeline_Config()
    overrides = {'data': args.data, 'out': args.out, 'seed': args.seed, 'level': args.level,
                 'format': args.format, 'replicate': args.replicate}
    if getattr(args, 'equations', None):
        try:
            overrides['equations'] = tuple(int(e) for e in args.equations.split(','))
        except ValueError:
            raise Config_Error(f'bad equation list {args.equations!r}') from None
    if getattr(args, 'graphs', None):
        overrides['graphs'] = True
    if getattr(args, 'workers', None) is not None:
        overrides['workers'] = args.workers
    return cfg.updated(**overrides).validate().pinned()


def print_table(console, table):
    rich_table = Table(title=table.title, title_justify='left')
    numeric = [all(isinstance(row[j], (int, float)) or row[j] is None for row in table.rows)
               for j in range(len(table.columns))]
    for column, is_numeric in zip(table.columns, numeric):
        rich_table.add_column(column, justify='right' if is_numeric else 'left')
    for row in table.rows:
        rich_table.add_row(*(format_cell(cell, table.precision) for cell in row))
    console.print(rich_table)


# ------ subcommands ------

def _entry(args, cfg, d, stages):
    roles = EQUATIONS[args.equation]
    entry = Equation_Report(args.equation, roles)
    sub = d.select(roles)
    for stage in stages:
        stage(entry, sub, cfg)
    return entry, sub


def _lag_order(entry, sub, cfg, args):
    if args.lags is None:
        lag_stage(entry, sub, cfg)
    else:
        entry.lag_order = args.lags


def command_tables(args, cfg, d):
    command = args.command
    if command == 'unitroot':
        entry, _ = _entry(args, cfg, d, [unit_root_stage])
    elif command == 'breaks':
        entry, _ = _entry(args, cfg, d, [break_stage])
    elif command == 'lagselect':
        entry, _ = _entry(args, cfg, d, [lag_stage])
    elif command in ('johansen', 'vecm', 'var'):
        entry, sub = _entry(args, cfg, d, [])
        _lag_order(entry, sub, cfg, args)
        if command == 'var':
            var_stage(entry, sub, cfg)
        else:
            johansen_stage(entry, sub, cfg)
        if command == 'vecm':
            johansen = entry.johansen
            rank = johansen.selected_rank if args.rank is None else args.rank
            diff_lags = cfg.diff_lags_for(johansen.lag_order)
            entry.vecm = vecm_fit(sub, johansen.lag_order, rank, cfg.det_case, diff_lags, cfg.ect_count, johansen)
            if rank > 0:
                entry.vecm_granger = vecm_granger_table(entry.vecm, cfg.level)
            else:
                entry.vecm_granger = []
    else:
        entry = run_equation(d, args.equation, cfg)
        if entry.errors:
            error = entry.errors[0]
            raise getattr(errors, error.error, Coint_Error)(f'{error.stage}: {error.message}')
        if command == 'diagnose' and entry.diagnostics is None:
            diagnostics_stage(entry, d.select(entry.roles), cfg)
    tables = equation_tables(entry)
    if command == 'causality':
        tables = [t for t in tables if t.kind == 'causality']
    elif command == 'diagnose':
        tables = [t for t in tables if t.kind == 'diagnostics']
    elif command == 'johansen':
        tables = [t for t in tables if t.kind == 'johansen']
    notes = tuple((entry.equation, text) for text in entry.notes)
    return tables, notes


def _write_graphs(report, cfg):
    out = Path(cfg.out)
    for entry in report.equations:
        if entry.path is not None:
            write_dot(causality_graph(entry, cfg.level), out / f'eq{entry.equation}_causality.dot')


def run(args, console):
    cfg = make_config(args)
    metadata = tuple((f'config.{key}', str(value)) for key, value in cfg.echo())
    if args.command == 'pipeline':
        report = run_pipeline(cfg)
        for table in report.tables:
            print_table(console, table)
        render_report(report, cfg.out, cfg.format, cfg.tables)
        if cfg.graphs:
            _write_graphs(report, cfg)
        for error in report.errors:
            console.print(f'[red]equation {error.equation}, {error.stage}: {error.error}: {error.message}[/red]')
        codes = [getattr(errors, e.error, Coint_Error).exit_code for e in report.errors]
        return max(codes, default=0)
    if args.command == 'montecarlo':
        tests = tuple(t.strip() for t in args.tests.split(',') if t.strip())
        results = size_study(tests, args.nobs, args.replications, cfg.seed, cfg.level, cfg.workers)
        tables, notes = [size_table(results)], ()
    else:
        d, _, data_notes = load_data(cfg)
        if args.command == 'export-series':
            out = Path(cfg.out)
            try:
                out.mkdir(parents=True, exist_ok=True)
            except OSError as error:
                raise Output_Error(f'cannot create output directory {out}: {error}') from error
            export_series(d, out / 'series.csv')
            console.print(f'wrote {out / "series.csv"}')
            return 0
        tables, notes = command_tables(args, cfg, d)
        notes = (*((0, text) for text in data_notes), *notes)
    for table in tables:
        print_table(console, table)
    for _, text in notes:
        console.print(f'note: {text}')
    if args.out:
        render_report(Analysis_Report(tuple(tables), metadata, tuple(notes)), cfg.out, cfg.format, cfg.tables)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    console = Console()
    try:
        return run(args, console)
    except Coint_Error as error:
        logger.error('%s: %s', type(error).__name__, error)
        return error.exit_code


if __name__ == '__main__':
    sys.exit(main())
