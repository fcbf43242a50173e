#!/usr/bin/env python3
"""Convert a GML network with a two-valued node attribute into the edge-list
and labels files the package reads.

Directions and parallel edges are dropped, self-loops removed. Nodes are
numbered 0..n-1 in file order; the attribute's two values (sorted) become
labels 1 and 2.

    python scripts/convert_gml.py polblogs.gml data/polblogs --attr value
    python scripts/convert_gml.py dolphins.gml data/dolphins --attr group

Needs networkx (``pip install -e ".[data]"``).
"""

import argparse
import sys

import networkx as nx

from epcd.graph import from_edges, write_edge_list, write_labels


def convert(path, attr):
    G = nx.read_gml(path, label="id")
    index = {v: i for i, v in enumerate(G.nodes)}
    values = [G.nodes[v].get(attr) for v in G.nodes]
    if any(v is None for v in values):
        raise SystemExit(f"some nodes lack attribute {attr!r}")
    levels = sorted(set(values))
    if len(levels) != 2:
        raise SystemExit(f"attribute {attr!r} has {len(levels)} values, need 2: {levels[:5]}")
    labels = [1 if v == levels[0] else 2 for v in values]
    edges = [(index[u], index[v]) for u, v in G.to_undirected().edges() if u != v]
    return from_edges(len(index), edges), labels, levels


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("gml")
    p.add_argument("prefix", help="writes <prefix>.edges and <prefix>.labels")
    p.add_argument("--attr", default="value", help="node attribute holding the two groups")
    args = p.parse_args(argv)
    g, labels, levels = convert(args.gml, args.attr)
    write_edge_list(g, args.prefix + ".edges")
    write_labels(labels, args.prefix + ".labels")
    print(f"{g.n} nodes, {g.num_edges} edges; label 1 = {levels[0]!r}, label 2 = {levels[1]!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
