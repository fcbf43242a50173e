"""Command-line entry point: ``epcd {detect,simulate,generate,embed}``."""

from __future__ import annotations

import argparse
import itertools
import logging
import os
import sys

import numpy as np

from . import experiment
from .baselines import les, scr
from .detect import aep_detect, ep_detect
from .graph import (GraphFormatError, largest_connected_component, load_edge_list, load_labels,
                    write_edge_list, write_labels)
from .metrics import misclustered_fraction, nmi
from .models import PRESETS, InfeasibleConfig, SimConfig, coerce_config, parse_config_text, sample_dcsbm
from .objectives import CRITERIA
from .spectral import DEFAULT_EPSILON, DEFAULT_TOL, EigenSolverError, embedding, write_embedding_csv

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _read_graph(path, lcc=False):
    if not os.path.isfile(path):
        raise UsageError(f"cannot read graph file: {path}")
    try:
        g = load_edge_list(path)
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    mapping = np.arange(g.n)
    if lcc:
        g, mapping = largest_connected_component(g)
    return g, mapping


def _add_model_flags(p):
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--w", help="community weights, e.g. 1,3")
    p.add_argument("--r", help="out-in ratio; a comma list sweeps a grid")
    p.add_argument("--lambda", dest="lam", help="expected degree; a comma list sweeps a grid")
    p.add_argument("--gamma", type=float)
    p.add_argument("--theta-low", type=float)
    p.add_argument("--theta-high", type=float)


def _configs_from_args(args) -> list[SimConfig]:
    raw = {}
    if args.config:
        if not os.path.isfile(args.config):
            raise UsageError(f"cannot read config file: {args.config}")
        with open(args.config) as fh:
            raw.update(parse_config_text(fh.read()))
    flags = coerce_config({"n": args.n, "n1": args.n1, "n2": args.n2, "w": args.w, "r": args.r,
                           "lam": args.lam, "gamma": args.gamma, "theta_low": args.theta_low,
                           "theta_high": args.theta_high})
    raw.update(flags)
    preset = args.preset or raw.pop("preset", None)
    raw.pop("preset", None)
    n2 = raw.pop("n2", None)
    rs = raw.pop("r", None)
    lams = raw.pop("lam", None)
    rs = rs if isinstance(rs, list) else [rs]
    lams = lams if isinstance(lams, list) else [lams]
    out = []
    for r, lam in itertools.product(rs, lams):
        kw = dict(raw)
        if lam is not None:
            kw["lam"] = lam
        if preset:
            base = PRESETS[preset]()
            if r is not None:
                raise UsageError("the extraction preset fixes P0; --r does not apply")
            cfg = base.with_(**kw)
        else:
            if r is not None:
                kw["r"] = r
            n = kw.get("n", SimConfig.n)
            if "n1" not in kw:
                kw["n1"] = n - n2 if n2 is not None else n // 2
            elif n2 is not None and kw["n1"] + n2 != n:
                if "n" in kw:
                    raise UsageError("n1 + n2 must equal n")
                kw["n"] = kw["n1"] + n2
            try:
                cfg = SimConfig(**kw)
            except (TypeError, ValueError) as exc:
                raise UsageError(str(exc)) from None
        out.append(cfg)
    return out


def cmd_detect(args) -> int:
    g, mapping = _read_graph(args.graph, lcc=args.lcc)
    truth = None
    if args.truth:
        if not os.path.isfile(args.truth):
            raise UsageError(f"cannot read labels file: {args.truth}")
        try:
            truth = load_labels(args.truth)
        except GraphFormatError as exc:
            raise UsageError(f"{args.truth}: {exc}") from None
        if truth.size < mapping.max() + 1:
            raise UsageError(f"{args.truth}: {truth.size} labels for {mapping.max() + 1} nodes")
        truth = truth[mapping]
    extra = ""
    if args.method == "ep":
        res = ep_detect(g, args.criterion, epsilon=args.epsilon, tol=args.tol, seed=args.seed)
        labels = res.labels
        extra = f" objective={res.objective_value:.6g} candidates={res.candidates_evaluated}"
    elif args.method == "aep":
        labels = aep_detect(embedding(g, epsilon=args.epsilon, tol=args.tol, seed=args.seed))
    elif args.method == "scr":
        labels = scr(g, epsilon=args.epsilon, restarts=args.restarts, tol=args.tol, seed=args.seed)
    else:
        labels = les(g, epsilon=args.epsilon, tol=args.tol, seed=args.seed)

    out = args.out or (os.path.splitext(args.graph)[0] + f".{args.method}.labels")
    if args.lcc:
        with open(out, "w") as fh:
            fh.writelines(f"{int(i)} {int(v)}\n" for i, v in zip(mapping, labels))
    else:
        write_labels(labels, out)
    name = args.method if args.method != "ep" else f"ep[{args.criterion}]"
    line = f"{name} n={g.n} edges={g.num_edges} labels={out}{extra}"
    if truth is not None:
        line += f" nmi={nmi(truth, labels):.4f} misclustered={misclustered_fraction(truth, labels):.4f}"
    print(line)
    return EXIT_OK


def cmd_simulate(args) -> int:
    configs = _configs_from_args(args)
    try:
        pairs = experiment.expand_methods(_csv_list(args.methods), _csv_list(args.criteria))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    rows = experiment.simulate(configs, pairs, args.reps, seed=args.seed, epsilon=args.epsilon,
                               tol=args.tol, jobs=args.jobs, timing=args.timing)
    if args.out:
        experiment.rows_to_csv(rows, args.out)
    else:
        sys.stdout.write(experiment.rows_to_csv(rows))
    for s in experiment.summarize(rows):
        print(f"{s['method']:<8} r={s['r']:<5g} lambda={s['lambda']:<5g} gamma={s['gamma']:<4g} "
              f"w={s['w']} nmi={s['nmi_mean']:.4f}+-{s['nmi_std']:.4f} "
              f"misclustered={s['misclustered_mean']:.4f} failures={s['failures']}",
              file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_generate(args) -> int:
    configs = _configs_from_args(args)
    if len(configs) != 1:
        raise UsageError("generate takes a single r and lambda")
    cfg = configs[0].with_(seed=args.seed)
    g, labels, theta = sample_dcsbm(cfg)
    write_edge_list(g, args.out + ".edges")
    write_labels(labels, args.out + ".labels")
    np.savetxt(args.out + ".theta", theta, fmt="%.6g")
    print(f"wrote {args.out}.edges ({g.num_edges} edges, mean degree {g.total_degree / g.n:.3f}), "
          f"{args.out}.labels, {args.out}.theta")
    return EXIT_OK


def cmd_embed(args) -> int:
    g, _ = _read_graph(args.graph, lcc=args.lcc)
    emb = embedding(g, epsilon=args.epsilon, tol=args.tol, seed=args.seed)
    write_embedding_csv(emb, args.out)
    print(f"tau={emb.tau:.6g} eigenvalues={emb.eigenvalues[0]:.6g},{emb.eigenvalues[1]:.6g} -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="epcd", description="Extreme-point community detection")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("detect", help="label the nodes of an edge-list graph")
    d.add_argument("graph")
    d.add_argument("--method", choices=experiment.METHODS, default="ep")
    d.add_argument("--criterion", choices=sorted(CRITERIA), default="bm")
    d.add_argument("--truth", help="labels file to score against")
    d.add_argument("--restarts", type=int, default=40)
    d.add_argument("--lcc", action="store_true", help="restrict to the largest connected component")
    d.add_argument("--out")
    common(d)
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="replicated benchmark on generated graphs, CSV output")
    _add_model_flags(s)
    s.add_argument("--methods", default="ep,aep,scr")
    s.add_argument("--criteria", default="bm")
    s.add_argument("--reps", type=int, default=100)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    s.add_argument("--out")
    common(s)
    s.set_defaults(func=cmd_simulate)

    gen = sub.add_parser("generate", help="sample one graph to <out>.edges/.labels/.theta")
    _add_model_flags(gen)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    e = sub.add_parser("embed", help="dump the 2 x n embedding as CSV")
    e.add_argument("graph")
    e.add_argument("--lcc", action="store_true")
    e.add_argument("--out", required=True)
    common(e)
    e.set_defaults(func=cmd_embed)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"epcd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"epcd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleConfig, EigenSolverError, RuntimeError, ValueError) as exc:
        print(f"epcd: failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
