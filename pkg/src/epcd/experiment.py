"""Replicated simulation runs that produce benchmark rows."""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import les, scr
from .detect import aep_detect, ep_detect
from .metrics import misclustered_fraction, nmi
from .models import SimConfig, edge_prob_matrix, sample_dcsbm
from .objectives import CRITERIA
from .spectral import DEFAULT_EPSILON, DEFAULT_TOL, embedding

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_FIELDS = ["schema_version", "method", "criterion", "n", "n1", "n2", "w1", "w2", "r", "lambda",
              "gamma", "epsilon", "seed", "rep", "nmi", "misclustered", "wall_ms", "candidates"]
METHODS = ("ep", "aep", "scr", "les")


@dataclass
class BenchmarkRow:
    method: str
    criterion: str
    cfg: SimConfig
    epsilon: float
    seed: int
    rep: int
    nmi: float
    misclustered: float
    wall_ms: float | None
    candidates: int

    def as_dict(self) -> dict:
        w1, w2 = self.cfg.w
        return {
            "schema_version": SCHEMA_VERSION, "method": self.method, "criterion": self.criterion,
            "n": self.cfg.n, "n1": self.cfg.n1, "n2": self.cfg.n2, "w1": repr(float(w1)),
            "w2": repr(float(w2)), "r": repr(float(self.cfg.r)), "lambda": repr(float(self.cfg.lam)),
            "gamma": repr(float(self.cfg.gamma)), "epsilon": repr(float(self.epsilon)),
            "seed": self.seed, "rep": self.rep, "nmi": f"{self.nmi:.6f}",
            "misclustered": f"{self.misclustered:.6f}",
            "wall_ms": "" if self.wall_ms is None else f"{self.wall_ms:.3f}",
            "candidates": self.candidates,
        }


def expand_methods(methods, criteria) -> list[tuple[str, str]]:
    """("ep", ["bm", "dc"]) -> [("ep", "bm"), ("ep", "dc")]; "ep-dc" pins one criterion."""
    out = []
    for m in methods:
        m = m.strip().lower()
        if m.startswith("ep-"):
            crit = m[3:]
            if crit not in CRITERIA:
                raise ValueError(f"unknown criterion in method {m!r}")
            out.append(("ep", crit))
        elif m == "ep":
            if not criteria:
                raise ValueError("method 'ep' needs at least one criterion")
            out.extend(("ep", c) for c in criteria)
        elif m in METHODS:
            out.append((m, ""))
        else:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS} or ep-<criterion>")
    return out


def rep_seed(seed: int, *index: int) -> int:
    """Independent per-replication seed derived from the base seed and indices."""
    return int(np.random.SeedSequence([seed, *index]).generate_state(1)[0])


def run_replication(cfg: SimConfig, pairs, rep: int, seed: int, grid_index: int = 0,
                    epsilon: float = DEFAULT_EPSILON, tol: float = DEFAULT_TOL,
                    timing: bool = False) -> list[BenchmarkRow]:
    s = rep_seed(seed, grid_index, rep)
    graph, truth, _ = sample_dcsbm(cfg.with_(seed=s))
    rows = []
    emb = None
    emb_ms = 0.0
    for method, crit in pairs:
        t0 = time.perf_counter()
        cand = 0
        try:
            if method in ("ep", "aep", "scr") and emb is None:
                e0 = time.perf_counter()
                emb = embedding(graph, epsilon=epsilon, tol=tol, seed=s)
                emb_ms = (time.perf_counter() - e0) * 1e3
                t0 = time.perf_counter()
            if method == "ep":
                res = ep_detect(graph, crit, epsilon=epsilon, tol=tol, seed=s, emb=emb)
                labels, cand = res.labels, res.candidates_evaluated
            elif method == "aep":
                labels = aep_detect(emb)
            elif method == "scr":
                labels = scr(graph, epsilon=epsilon, tol=tol, seed=s, emb=emb)
            else:
                labels = les(graph, epsilon=epsilon, tol=tol, seed=s)
            score, miss = nmi(truth, labels), misclustered_fraction(truth, labels)
        except Exception as exc:  # one failed draw must not sink the whole run
            log.warning("rep %d %s[%s] failed: %s", rep, method, crit, exc)
            score = miss = float("nan")
        ms = (time.perf_counter() - t0) * 1e3 + (emb_ms if method in ("ep", "aep", "scr") else 0.0)
        rows.append(BenchmarkRow(method, crit, cfg, epsilon, seed, rep, score, miss,
                                 ms if timing else None, cand))
    return rows


def _run_task(args):
    return run_replication(*args[:-1], **args[-1])


def simulate(configs, pairs, reps: int, seed: int = 0, epsilon: float = DEFAULT_EPSILON,
             tol: float = DEFAULT_TOL, jobs: int = 1, timing: bool = False) -> list[BenchmarkRow]:
    """Run ``reps`` replications of every config; rows come back in (config, rep) order."""
    configs = list(configs)
    for cfg in configs:
        edge_prob_matrix(cfg)  # fail before doing any work
    tasks = [(cfg, pairs, rep, seed, gi, dict(epsilon=epsilon, tol=tol, timing=timing))
             for gi, cfg in enumerate(configs) for rep in range(reps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_task(t) for t in tasks]
    return [row for chunk in results for row in chunk]


def rows_to_csv(rows, target=None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_dict())
    text = buf.getvalue()
    if target is not None:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    return text


def summarize(rows) -> list[dict]:
    """Mean/std of NMI and misclustering per (config, method, criterion)."""
    groups: dict = {}
    for row in rows:
        key = (row.cfg.n1, row.cfg.w, row.cfg.r, row.cfg.lam, row.cfg.gamma, row.method, row.criterion)
        groups.setdefault(key, []).append(row)
    out = []
    for (n1, w, r, lam, gamma, method, crit), rs in groups.items():
        v = np.array([x.nmi for x in rs])
        mc = np.array([x.misclustered for x in rs])
        out.append({"method": method if not crit else f"{method}[{crit}]", "n1": n1, "w": w, "r": r,
                    "lambda": lam, "gamma": gamma, "reps": len(rs),
                    "nmi_mean": float(np.nanmean(v)), "nmi_std": float(np.nanstd(v)),
                    "misclustered_mean": float(np.nanmean(mc)), "failures": int(np.isnan(v).sum())})
    return out
