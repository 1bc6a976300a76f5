import sys

import coint_causality as cc
from coint_causality.causality_graph import causality_graph


def draw_graphs(prefix, dark=False):
    report = cc.run_pipeline(cc.replication())
    for entry in report.equations:
        if entry.path is None:
            print(f'equation {entry.equation}: no causality results', entry.errors)
            continue
        graph = causality_graph(entry, dark=dark)
        graph.format = 'png'
        filename = f'{prefix}{entry.equation}'
        graph.render(filename, cleanup=True)
        print('written', filename + '.png')

if __name__ == "__main__":
    if len(sys.argv) not in (2, 3):
        print("Usage: python causality_graphs.py <output_prefix> [dark]")
        sys.exit(1)
    draw_graphs(sys.argv[1], len(sys.argv) == 3 and sys.argv[2] == 'dark')
