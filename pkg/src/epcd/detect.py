"""Extreme-point search (EP) and its closed-form approximation (AEP)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .objectives import SYMMETRIC, BlockCounts, get_criterion, sweep_counts
from .spectral import DEFAULT_EPSILON, DEFAULT_TOL, Embedding, embedding
from .zonotope import CandidateSweep, sweep_vertices

TIE_RTOL = 1e-12


class NoValidPartition(RuntimeError):
    pass


@dataclass
class DetectionResult:
    labels: np.ndarray
    objective_value: float
    candidates_evaluated: int
    tie_broken: bool = False
    diagnostics: dict = field(default_factory=dict)


def _candidate_offsets(sweep: CandidateSweep, symmetric: bool) -> np.ndarray:
    offsets = sweep.vertex_offsets()
    if symmetric and sweep.flip_order.size:
        # the vertex reached after n_active flips is the antipode of the start,
        # and the rest of the walk mirrors the first half
        half = sweep.flip_order.size // 2
        offsets = offsets[offsets < half]
    return offsets


def _projections(basis: np.ndarray, sweep: CandidateSweep, offsets: np.ndarray) -> np.ndarray:
    """U e for the label vectors at the given flip offsets, 2 x len(offsets)."""
    p0 = basis @ sweep.start_labels.astype(float)
    if sweep.flip_order.size == 0:
        return np.repeat(p0[:, None], offsets.size, axis=1)
    # every active node flips twice: first away from its start sign, then back
    order = sweep.flip_order
    first = np.zeros(order.size, dtype=bool)
    first[np.unique(order, return_index=True)[1]] = True
    before = np.where(first, sweep.start_labels[order], -sweep.start_labels[order]).astype(float)
    steps = -2.0 * before[None, :] * basis[:, order]
    path = np.concatenate([p0[:, None], p0[:, None] + np.cumsum(steps, axis=1)], axis=1)
    return path[:, offsets]


def tie_break(candidates, basis, order=None) -> int:
    """Index of the candidate whose projection lies farthest from the line
    through +-U1; earlier candidates win exact ties.

    ``candidates`` is a sequence of label vectors, or a 2 x k array of their
    projections when ``basis`` is None.
    """
    if basis is None:
        proj = np.asarray(candidates, dtype=float)
        u1 = None
    else:
        basis = np.asarray(getattr(basis, "basis", basis))
        proj = basis @ np.asarray(candidates, dtype=float).T
        u1 = basis.sum(axis=1)
    return _farthest(proj, u1)


def _farthest(proj, u1):
    if proj.shape[1] == 1:
        return 0
    if u1 is None or np.linalg.norm(u1) == 0:
        dist = np.linalg.norm(proj, axis=0)
    else:
        normal = np.array([-u1[1], u1[0]]) / np.linalg.norm(u1)
        dist = np.abs(normal @ proj)
    best = dist.max()
    return int(np.flatnonzero(dist >= best - TIE_RTOL * max(best, 1.0))[0])


def ep_detect(graph: Graph, criterion: str = "bm", epsilon: float = DEFAULT_EPSILON,
              tol: float = DEFAULT_TOL, seed=0, emb: Embedding | None = None) -> DetectionResult:
    """Maximise a criterion over the labels at the vertices of U_A[-1, 1]^n.

    A precomputed (possibly rotated) embedding can be passed as ``emb``.
    """
    if graph.n == 0:
        raise ValueError("empty graph")
    crit = criterion.lower()
    f = get_criterion(crit)
    if emb is None:
        emb = embedding(graph, epsilon=epsilon, tol=tol, seed=seed)
    sweep = sweep_vertices(emb.basis)
    counts = sweep_counts(graph, sweep.start_labels, sweep.flip_order)
    offsets = _candidate_offsets(sweep, SYMMETRIC[crit])
    values = np.atleast_1d(f(counts[offsets]))
    best = values.max()
    if not np.isfinite(best):
        raise NoValidPartition("no valid bipartition among the enumerated candidates")
    tied = np.flatnonzero(values >= best - TIE_RTOL * abs(best))
    if tied.size > 1:
        proj = _projections(emb.basis, sweep, offsets[tied])
        pick = tied[_farthest(proj, emb.basis.sum(axis=1))]
    else:
        pick = tied[0]
    labels = sweep.labels_at(int(offsets[pick])).astype(np.int64)
    diag = dict(emb.diagnostics)
    diag["degenerate_nodes"] = int(sweep.degenerate_nodes.size)
    diag["num_ties"] = int(tied.size)
    return DetectionResult(labels, float(values[pick]), int(offsets.size), bool(tied.size > 1), diag)


def aep_detect(emb) -> np.ndarray:
    """sign((u1.1) u2 - (u2.1) u1), zeros mapped to +1."""
    U = np.asarray(getattr(emb, "basis", emb), dtype=float)
    u1, u2 = U
    score = u1.sum() * u2 - u2.sum() * u1
    if not np.any(score):
        raise ValueError("degenerate embedding: geometric direction is identically zero")
    return np.where(score < 0, -1, 1).astype(np.int64)
