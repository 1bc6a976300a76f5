# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

__version__ = "0.1.0"
__author__ = 'coint_causality developers'

from coint_causality.core import (Series, Dataset, Design_Matrix, System_Fit, Test_Result,
                                  diff, integrate, natural_log, align, lag_matrix, system_ols, ols_fit,
                                  wald_block_test, newey_west_lrv)
from coint_causality.critical_values import CRITICAL_VALUES, Critical_Value_Table
from coint_causality.unitroot import (Unit_Root_Result, adf_test, kpss_test, perron_test, perron_fixed_break,
                                      integration_order, unit_root_table)
from coint_causality.breaks import Break_Model, Break_Result, global_breaks, supf_test, sequential_breaks
from coint_causality.var import (Var_Fit, Lag_Selection_Table, var_fit, lag_order_select, var_granger,
                                 granger_table, stability, is_stable, information_criteria, modified_lr,
                                 final_prediction_error)
from coint_causality.coint import (Johansen_Result, Vecm_Fit, johansen_test, cointegrating_vectors, vecm_fit,
                                   vecm_granger, vecm_granger_table, ect_test, telescoping_gaps)
from coint_causality.diagnostics import (Diagnostic_Report, breusch_godfrey, jarque_bera, jarque_bera_joint,
                                         white_test, ramsey_reset, vif, diagnose)
from coint_causality.ingest import load_csv, write_csv, load_snapshot, snapshot_validate, export_series
from coint_causality.config import EQUATIONS, Pipeline_Config, read_config
from coint_causality.report import Report_Table, Analysis_Report, render_report, read_report
from coint_causality.pipeline import Equation_Report, run_pipeline
from coint_causality.causality_graph import Causality_Graph, causality_graph


def replication(**kwargs):
    """ Every design choice pinned to the published analysis. """
    return Pipeline_Config(replicate=True, **kwargs).validate().pinned()


def exploratory(**kwargs):
    """ Full analysis with the textbook VECM lag convention and causality graphs. """
    config = dict(diff_lags='levels_minus_one', graphs=True)
    config.update(kwargs)
    return Pipeline_Config(**config).validate()


def quick(**kwargs):
    """ Equation (1) only, short lag search, machine-readable output. """
    config = dict(equations=(1,), max_lag=2, bg_lags=(1,), format='json', workers=1)
    config.update(kwargs)
    return Pipeline_Config(**config).validate()
