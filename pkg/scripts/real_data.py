#!/usr/bin/env python3
"""NMI of every method on the dolphins and political-blogs networks.

Reads ``<name>.edges`` and ``<name>.labels`` from ``--data`` (default
``$EPCD_DATA`` or ``data/``); see ``convert_gml.py`` for producing them. The
blogs network is reduced to its largest connected component first.

Reference NMI values:

                 EP[BM]  EP[DC]  SCR    AEP
    dolphins     0.889   0.889   0.889  0.814
    blogs (LCC)  0.278   0.731   0.290  0.674
"""

import argparse
import os
import sys
import time
from pathlib import Path

from epcd.baselines import les, scr
from epcd.detect import aep_detect, ep_detect
from epcd.graph import largest_connected_component, load_edge_list, load_labels
from epcd.metrics import nmi
from epcd.spectral import embedding

DATASETS = {"dolphins": False, "polblogs": True}  # name -> restrict to LCC


def run(name, data_dir, lcc):
    g = load_edge_list(data_dir / f"{name}.edges")
    truth = load_labels(data_dir / f"{name}.labels")
    if lcc:
        g, mapping = largest_connected_component(g)
        truth = truth[mapping]
    t0 = time.perf_counter()
    emb = embedding(g)
    scores = {
        "ep[bm]": nmi(ep_detect(g, "bm", emb=emb).labels, truth),
        "ep[dc]": nmi(ep_detect(g, "dc", emb=emb).labels, truth),
        "ep[ng]": nmi(ep_detect(g, "ng", emb=emb).labels, truth),
        "aep": nmi(aep_detect(emb), truth),
        "scr": nmi(scr(g, emb=emb), truth),
        "les": nmi(les(g), truth),
    }
    return g, scores, time.perf_counter() - t0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--data", default=os.environ.get("EPCD_DATA", "data"))
    args = p.parse_args(argv)
    data_dir = Path(args.data)
    status = 0
    for name, lcc in DATASETS.items():
        if not (data_dir / f"{name}.edges").is_file():
            print(f"{name}: {data_dir / (name + '.edges')} not found, skipped")
            status = 1
            continue
        g, scores, secs = run(name, data_dir, lcc)
        cells = "  ".join(f"{k} {v:.3f}" for k, v in scores.items())
        print(f"{name:<9} n={g.n} edges={g.num_edges}  {cells}  ({secs:.2f} s)")
    return status


if __name__ == "__main__":
    sys.exit(main())
