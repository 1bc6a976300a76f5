# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

"""
Granger-causality graphs with graphviz. Nodes are variables, edges the
significant short-run links labelled with their chi-square statistic and
p-value. In a VECM graph, variables whose error-correction term is
significant are drawn in the long-run colour.
"""

import logging
from dataclasses import dataclass

from graphviz import Digraph

from coint_causality.errors import Output_Error

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Palette:
    foreground: str
    background: str
    node: str
    long_run: str


LIGHT = Palette(foreground='#000000', background='#ffffff', node='#ffffff', long_run='#ffcccc')
DARK = Palette(foreground='#cccccc', background='#1d1d1d', node='#1d1d1d', long_run='#664444')


class Causality_Graph:

    def __init__(self, name='causality', level=0.05, horizontal=True, palette=LIGHT,
                 fontname='Times-Roman', fontsize=14):
        self.name = name
        self.level = level
        self.horizontal = horizontal
        self.palette = palette
        self.fontname = fontname
        self.fontsize = fontsize

    def __repr__(self):
        return f'Causality_Graph(name={self.name!r}, level={self.level}, palette={self.palette})'

    def _digraph(self):
        font = {'fontname': self.fontname, 'fontsize': str(self.fontsize), 'fontcolor': self.palette.foreground}
        graph = Digraph(self.name,
                        graph_attr={**font, 'bgcolor': self.palette.background},
                        node_attr={**font, 'shape': 'ellipse', 'style': 'filled',
                                   'color': self.palette.foreground},
                        edge_attr={**font, 'color': self.palette.foreground})
        if self.horizontal:
            graph.attr(rankdir='LR')
        return graph

    def create_graph(self, roles, links, long_run=()):
        """
        ``links`` are (cause, effect, Test_Result); only rejections become edges.
        ``long_run`` holds (effect, Test_Result) for the error-correction terms.
        """
        graph = self._digraph()
        adjusting = {effect for effect, test in long_run if test is not None and test.p_value < self.level}
        for role in roles:
            fill = self.palette.long_run if role in adjusting else self.palette.node
            graph.node(role, label=role, fillcolor=fill)
        for cause, effect, test in links:
            if test.p_value < self.level:
                graph.edge(cause, effect, label=f'χ² {test.statistic:.2f} ({test.p_value:.3f})')
        return graph


def causality_graph(entry, level=0.05, dark=False):
    """
    Graph of one equation system's causality results. ``entry`` is an
    Equation_Report with either a VECM or a VAR Granger table.
    """
    graph = Causality_Graph(f'eq{entry.equation}_causality', level=level, palette=DARK if dark else LIGHT)
    if entry.vecm_granger:
        links = [(cause, effect, short) for cause, effect, short, _ in entry.vecm_granger]
        long_run = {(effect, long) for _, effect, _, long in entry.vecm_granger if long is not None}
        long_run = sorted(long_run, key=lambda item: item[0])
    else:
        links = list(entry.var_granger or ())
        long_run = ()
    logger.debug('causality graph eq%d: %d links', entry.equation, len(links))
    return graph.create_graph(entry.roles, links, long_run)


def write_dot(graph, path):
    """ DOT source only; rendering needs the graphviz binaries. """
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as file:
            file.write(graph.source)
    except OSError as error:
        raise Output_Error(f'cannot write {path}: {error}') from error
