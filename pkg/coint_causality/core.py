# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Series and Dataset types, the difference / log / lag transforms, and the
least-squares engine (single equation and common-regressor systems) that every
test in the package is built on.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import linalg, stats

from coint_causality.errors import (
    Alignment_Error, Degrees_Of_Freedom_Error, Domain_Error, Insufficient_Data_Error,
    Invalid_Restriction_Error, Parameter_Error, Parse_Error, Singular_Matrix_Error,
)

logger = logging.getLogger(__name__)

DETERMINISTIC_SPECS = ('none', 'intercept', 'intercept_trend')
RANK_TOLERANCE = 1e-10


def frozen_array(values, ndim=None):
    array = np.array(values, dtype=float)
    if ndim is not None and array.ndim != ndim:
        raise Parameter_Error(f'expected a {ndim}-dimensional array, got shape {array.shape}')
    array.setflags(write=False)
    return array


# ------ series and datasets ------

@dataclass(frozen=True, eq=False)
class Series:
    """ Annual series without gaps; ``values[i]`` belongs to year ``start_year + i``. """
    name: str
    start_year: int
    values: np.ndarray

    def __post_init__(self):
        values = frozen_array(self.values)
        if values.ndim != 1 or values.size == 0:
            raise Insufficient_Data_Error(f'series {self.name!r} has no values')
        missing = ~np.isfinite(values)
        if missing.any():
            year = int(self.start_year) + int(np.argmax(missing))
            raise Parse_Error(f'series {self.name!r} has a missing value in {year}')
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'start_year', int(self.start_year))

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f'Series(name={self.name!r}, {self.start_year}-{self.end_year}, n={len(self)})'

    @property
    def end_year(self):
        return self.start_year + len(self) - 1

    @property
    def years(self):
        return np.arange(self.start_year, self.end_year + 1)

    def at(self, year):
        if not self.start_year <= year <= self.end_year:
            raise Parameter_Error(f'{year} is outside {self.start_year}-{self.end_year} of {self.name!r}')
        return float(self.values[year - self.start_year])

    def window(self, start_year, end_year):
        if start_year < self.start_year or end_year > self.end_year or start_year > end_year:
            raise Alignment_Error(f'{start_year}-{end_year} is not inside {self.start_year}-{self.end_year} of {self.name!r}')
        first = start_year - self.start_year
        return Series(self.name, start_year, self.values[first:first + end_year - start_year + 1])

    def renamed(self, name):
        return Series(name, self.start_year, self.values)


@dataclass(frozen=True, eq=False)
class Dataset:
    """ Ordered (role, Series) pairs sharing one sample. Roles are unique. """
    variables: tuple
    sample: tuple

    def __post_init__(self):
        variables = tuple((str(role), series) for role, series in self.variables)
        roles = [role for role, _ in variables]
        if len(set(roles)) != len(roles):
            raise Alignment_Error(f'duplicate roles in dataset: {roles}')
        start, end = (int(y) for y in self.sample)
        for role, series in variables:
            if (series.start_year, series.end_year) != (start, end):
                raise Alignment_Error(f'{role} covers {series.start_year}-{series.end_year}, dataset sample is {start}-{end}')
        object.__setattr__(self, 'variables', variables)
        object.__setattr__(self, 'sample', (start, end))

    def __len__(self):
        return self.sample[1] - self.sample[0] + 1

    def __contains__(self, role):
        return role in self.roles

    def __repr__(self):
        return f'Dataset(roles={list(self.roles)}, sample={self.sample[0]}-{self.sample[1]})'

    @property
    def roles(self):
        return tuple(role for role, _ in self.variables)

    @property
    def years(self):
        return np.arange(self.sample[0], self.sample[1] + 1)

    def series(self, role):
        for name, series in self.variables:
            if name == role:
                return series
        raise Parameter_Error(f'role {role!r} not in dataset {list(self.roles)}')

    def index(self, role):
        try:
            return self.roles.index(role)
        except ValueError:
            raise Parameter_Error(f'role {role!r} not in dataset {list(self.roles)}') from None

    def matrix(self, roles=None):
        roles = self.roles if roles is None else roles
        return np.column_stack([self.series(role).values for role in roles])

    def select(self, roles):
        return Dataset(tuple((role, self.series(role)) for role in roles), self.sample)

    def window(self, start_year, end_year):
        return Dataset(tuple((role, s.window(start_year, end_year)) for role, s in self.variables),
                       (start_year, end_year))


# ------ transforms ------

def diff(s, order=1):
    if order < 1:
        raise Parameter_Error(f'difference order must be positive, got {order}')
    if order >= len(s):
        raise Insufficient_Data_Error(f'cannot difference {s.name!r} (n={len(s)}) {order} times')
    return Series('Δ' * order + s.name, s.start_year + order, np.diff(s.values, n=order))


def integrate(s, initial):
    """ Inverse of a first difference: cumulative sum started at ``initial``. """
    values = np.concatenate(([float(initial)], float(initial) + np.cumsum(s.values)))
    name = s.name[1:] if s.name.startswith('Δ') else s.name
    return Series(name, s.start_year - 1, values)


def natural_log(s):
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        year = s.start_year + int(bad[0])
        raise Domain_Error(f'log of non-positive value {s.values[bad[0]]} in {s.name!r} at {year}', year=year)
    return Series(s.name, s.start_year, np.log(s.values))


def align(series_list):
    """ Truncate series to their common sample. Items are Series (role = name) or (role, Series). """
    pairs = []
    for item in series_list:
        if isinstance(item, Series):
            pairs.append((item.name, item))
        else:
            role, series = item
            pairs.append((role, series))
    if len(pairs) < 2:
        raise Alignment_Error(f'need at least two series to align, got {len(pairs)}')
    start = max(s.start_year for _, s in pairs)
    end = min(s.end_year for _, s in pairs)
    if start > end:
        ranges = ', '.join(f'{r}:{s.start_year}-{s.end_year}' for r, s in pairs)
        raise Alignment_Error(f'series do not overlap ({ranges})')
    logger.debug('aligned %d series on %d-%d', len(pairs), start, end)
    return Dataset(tuple((role, s.window(start, end)) for role, s in pairs), (start, end))


# ------ design matrices ------

def deterministic_columns(det, nobs, first_period=1):
    """ Deterministic regressors; the trend counts periods of the underlying sample. """
    if det not in DETERMINISTIC_SPECS:
        raise Parameter_Error(f'unknown deterministic spec {det!r}, expected one of {DETERMINISTIC_SPECS}')
    columns, labels = [], []
    if det in ('intercept', 'intercept_trend'):
        columns.append(np.ones(nobs))
        labels.append('const')
    if det == 'intercept_trend':
        columns.append(np.arange(first_period, first_period + nobs, dtype=float))
        labels.append('trend')
    if not columns:
        return np.empty((nobs, 0)), ()
    return np.column_stack(columns), tuple(labels)


@dataclass(frozen=True, eq=False)
class Design_Matrix:
    targets: np.ndarray
    regressors: np.ndarray
    column_labels: tuple
    target_labels: tuple
    years: np.ndarray
    lag_order: int
    differenced: bool

    @property
    def t_eff(self):
        return self.targets.shape[0]

    def columns_of(self, prefix):
        """ Indices of the columns whose label starts with ``prefix`` (e.g. ``'FD.L'``). """
        return [i for i, label in enumerate(self.column_labels) if label.startswith(prefix)]

    def __repr__(self):
        return f'Design_Matrix(t_eff={self.t_eff}, k={len(self.column_labels)}, p={self.lag_order}, differenced={self.differenced})'


def lag_matrix(d, p, det='intercept', differenced=False, offset=0):
    """
    Targets are current values (first differences when ``differenced``); regressor
    columns are lags 1..p of each variable in dataset order, then deterministics.
    ``offset`` drops extra leading rows so fits at different p share one sample.
    """
    if p < 0 or offset < 0:
        raise Parameter_Error(f'lag order and offset must be non-negative, got p={p}, offset={offset}')
    data = d.matrix()
    years = d.years
    if differenced:
        data = np.diff(data, axis=0)
        years = years[1:]
    nobs = data.shape[0]
    start = p + offset
    t_eff = nobs - start
    if t_eff <= 0:
        raise Insufficient_Data_Error(f'{len(d)} observations leave no rows at p={p}, offset={offset}')
    prefix = 'Δ' if differenced else ''
    blocks, labels = [], []
    for j, role in enumerate(d.roles):
        for lag in range(1, p + 1):
            blocks.append(data[start - lag:nobs - lag, j])
            labels.append(f'{prefix}{role}.L{lag}')
    det_matrix, det_labels = deterministic_columns(det, t_eff, first_period=start + int(differenced) + 1)
    lagged = np.column_stack(blocks) if blocks else np.empty((t_eff, 0))
    regressors = np.hstack([lagged, det_matrix])
    k = regressors.shape[1]
    if t_eff <= k:
        raise Degrees_Of_Freedom_Error(f't_eff={t_eff} does not exceed k={k} regressors')
    return Design_Matrix(frozen_array(data[start:]), frozen_array(regressors), tuple(labels) + det_labels,
                         tuple(prefix + role for role in d.roles), years[start:], p, differenced)


# ------ least squares ------

@dataclass(frozen=True)
class Test_Result:
    __test__ = False  # not a pytest class

    name: str
    statistic: float
    distribution: str
    df: tuple = ()
    p_value: Optional[float] = None
    level: float = 0.05
    critical_value: Optional[float] = None
    reject_upper: bool = True
    note: str = ''

    @property
    def rejected(self):
        if self.p_value is not None and not math.isnan(self.p_value):
            return self.p_value < self.level
        if self.critical_value is not None:
            if self.reject_upper:
                return self.statistic > self.critical_value
            return self.statistic < self.critical_value
        return False

    @property
    def decision(self):
        return 'reject_null' if self.rejected else 'fail_to_reject'

    def at_level(self, level):
        return dataclasses.replace(self, level=level)

    def __str__(self):
        df = ','.join(str(x) for x in self.df)
        p = 'n/a' if self.p_value is None else f'{self.p_value:.4f}'
        return f'{self.name}: {self.distribution}({df}) = {self.statistic:.4f}, p = {p} -> {self.decision}'


@dataclass(frozen=True, eq=False)
class System_Fit:
    coefficients: np.ndarray
    residuals: np.ndarray
    resid_cov: np.ndarray
    log_likelihood: float
    ssr_per_equation: np.ndarray
    coefficient_cov: tuple
    r_squared: np.ndarray
    regressors: np.ndarray
    targets: np.ndarray
    column_labels: tuple
    equation_labels: tuple
    has_constant: bool

    @property
    def nobs(self):
        return self.residuals.shape[0]

    @property
    def n_regressors(self):
        return self.regressors.shape[1]

    @property
    def n_equations(self):
        return self.residuals.shape[1]

    @property
    def df_resid(self):
        return self.nobs - self.n_regressors

    @property
    def fitted(self):
        return self.targets - self.residuals

    @property
    def standard_errors(self):
        return np.column_stack([np.sqrt(np.clip(np.diag(cov), 0.0, None)) for cov in self.coefficient_cov]) \
            if self.n_regressors else np.empty((0, self.n_equations))

    @property
    def t_ratios(self):
        se = self.standard_errors
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(se > 0, self.coefficients / np.where(se > 0, se, 1.0), np.nan)

    @property
    def p_values(self):
        return 2.0 * stats.t.sf(np.abs(self.t_ratios), self.df_resid)

    def equation(self, label):
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.n_equations:
                raise Parameter_Error(f'equation index {label} out of range')
            return int(label)
        try:
            return self.equation_labels.index(label)
        except ValueError:
            raise Parameter_Error(f'no equation {label!r} in {list(self.equation_labels)}') from None

    def __repr__(self):
        return f'System_Fit(nobs={self.nobs}, k={self.n_regressors}, n={self.n_equations}, logL={self.log_likelihood:.4f})'


def check_rank(X, column_labels):
    """ Relative singular-value test on unit-norm columns; names the dependent columns. """
    norms = np.linalg.norm(X, axis=0)
    zero = norms == 0
    if zero.any():
        names = [column_labels[i] for i in np.flatnonzero(zero)]
        raise Singular_Matrix_Error(f'regressor columns are identically zero: {names}', names)
    _, s, vt = linalg.svd(X / norms, full_matrices=False)
    small = s < RANK_TOLERANCE * s[0]
    if small.any():
        null_space = vt[small]
        involved = np.flatnonzero(np.abs(null_space).max(axis=0) > 1e-6)
        names = [column_labels[i] for i in involved]
        raise Singular_Matrix_Error(f'regressors are linearly dependent: {names}', names)


def _has_constant(X):
    return any(np.ptp(column) == 0 and column[0] != 0 for column in X.T)


def system_ols(Y, X, column_labels=None, equation_labels=None):
    """ Equation-by-equation least squares on common regressors. """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    nobs, k = X.shape
    n = Y.shape[1]
    if Y.shape[0] != nobs:
        raise Parameter_Error(f'{Y.shape[0]} target rows but {nobs} regressor rows')
    if nobs <= k:
        raise Degrees_Of_Freedom_Error(f'{nobs} observations for {k} regressors')
    column_labels = tuple(column_labels) if column_labels is not None else tuple(f'x{i}' for i in range(k))
    equation_labels = tuple(equation_labels) if equation_labels is not None else tuple(f'y{j}' for j in range(n))
    if k:
        check_rank(X, column_labels)
        q, r = linalg.qr(X, mode='economic')
        r_inv = linalg.solve_triangular(r, np.eye(k))
        coefficients = r_inv @ (q.T @ Y)
        xtx_inv = r_inv @ r_inv.T
    else:
        coefficients = np.empty((0, n))
        xtx_inv = np.empty((0, 0))
    residuals = Y - X @ coefficients
    ssr = np.einsum('ij,ij->j', residuals, residuals)
    has_constant = _has_constant(X) if k else False
    centred = Y - Y.mean(axis=0) if has_constant else Y
    sst = np.einsum('ij,ij->j', centred, centred)
    with np.errstate(divide='ignore', invalid='ignore'):
        r_squared = np.clip(np.where(sst > 0, 1.0 - ssr / np.where(sst > 0, sst, 1.0), 0.0), 0.0, 1.0)
    resid_cov = residuals.T @ residuals / nobs
    resid_cov = (resid_cov + resid_cov.T) / 2.0
    sign, logdet = np.linalg.slogdet(resid_cov)
    if sign <= 0:
        log_likelihood = math.inf
    else:
        log_likelihood = -(nobs * n / 2.0) * (1.0 + math.log(2.0 * math.pi)) - (nobs / 2.0) * logdet
    sigma2 = ssr / (nobs - k)
    coefficient_cov = tuple(frozen_array(s2 * xtx_inv) for s2 in sigma2)
    logger.debug('system ols: nobs=%d k=%d n=%d logL=%.6f', nobs, k, n, log_likelihood)
    return System_Fit(frozen_array(coefficients), frozen_array(residuals), frozen_array(resid_cov),
                      float(log_likelihood), frozen_array(ssr), coefficient_cov, frozen_array(r_squared),
                      frozen_array(X), frozen_array(Y), column_labels, equation_labels, has_constant)


def ols_fit(y, X, column_labels=None, name='y'):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise Parameter_Error(f'ols_fit expects a vector target, got shape {y.shape}')
    return system_ols(y[:, None], X, column_labels, (name,))


def fit_design(design):
    return system_ols(design.targets, design.regressors, design.column_labels, design.target_labels)


def wald_block_test(fit, equation, coefficient_indices, name='wald', level=0.05):
    """ Chi-square test that a block of one equation's coefficients is zero. """
    eq = fit.equation(equation)
    indices = sorted({int(i) for i in coefficient_indices})
    if not indices:
        raise Invalid_Restriction_Error('empty coefficient block')
    if indices[0] < 0 or indices[-1] >= fit.n_regressors:
        raise Invalid_Restriction_Error(f'coefficient indices {indices} outside 0..{fit.n_regressors - 1}')
    b = fit.coefficients[indices, eq]
    V = fit.coefficient_cov[eq][np.ix_(indices, indices)]
    eigenvalues = linalg.eigvalsh(V)
    if eigenvalues[-1] <= 0 or eigenvalues[0] <= RANK_TOLERANCE * eigenvalues[-1]:
        labels = [fit.column_labels[i] for i in indices]
        raise Singular_Matrix_Error(f'covariance of block {labels} is singular', labels)
    statistic = float(b @ linalg.solve(V, b, assume_a='sym'))
    df = len(indices)
    return Test_Result(name, statistic, 'chi2', (df,), float(stats.chi2.sf(statistic, df)), level)


def t_test(fit, equation, index, name='t', level=0.05):
    eq = fit.equation(equation)
    if not 0 <= index < fit.n_regressors:
        raise Invalid_Restriction_Error(f'coefficient index {index} outside 0..{fit.n_regressors - 1}')
    t = float(fit.t_ratios[index, eq])
    return Test_Result(name, t, 't', (fit.df_resid,), float(2.0 * stats.t.sf(abs(t), fit.df_resid)), level)


def newey_west_lrv(u, bandwidth):
    """ Bartlett-kernel long-run variance of ``u`` (autocovariances with divisor T). """
    u = np.asarray(u, dtype=float).ravel()
    if bandwidth < 0 or bandwidth >= u.size:
        raise Parameter_Error(f'bandwidth {bandwidth} must lie in [0, {u.size})')
    e = u - u.mean()
    nobs = e.size
    lrv = e @ e / nobs
    for j in range(1, bandwidth + 1):
        lrv += 2.0 * (1.0 - j / (bandwidth + 1.0)) * (e[j:] @ e[:-j]) / nobs
    return max(float(lrv), 0.0)
