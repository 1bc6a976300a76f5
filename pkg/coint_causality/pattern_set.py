# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

import re

from coint_causality.errors import Config_Error


def _alternative(target):
    target = target.strip()
    if target.startswith('re:'):
        return f'({target[3:]})'
    return re.escape(target)


class Pattern_Set:
    """ Exact names and ``re:`` regular expressions, matched against whole table names. """

    def __init__(self, target_set=None):
        self.target_set = None
        self.compiled_pattern = None  # None matches every name
        if target_set is not None:
            self.update_pattern(target_set)

    def __repr__(self):
        return f'Pattern_Set({sorted(self.target_set or ())})'

    def update_pattern(self, target_set):
        target_set = frozenset(target_set)
        if target_set == self.target_set:
            return
        self.target_set = target_set
        pattern = '^(' + '|'.join(_alternative(t) for t in sorted(target_set)) + ')$'
        try:
            self.compiled_pattern = re.compile(pattern)
        except re.error as error:
            raise Config_Error(f'bad table pattern in {sorted(target_set)}: {error}') from error

    def match(self, name, target_set=None):
        if target_set is not None:
            self.update_pattern(target_set)
        if self.compiled_pattern is None:
            return True
        return self.compiled_pattern.match(name) is not None

    def select(self, names):
        return [name for name in names if self.match(name)]
