"""Boundary sweep of the planar zonotope U[-1, 1]^n.

The image of the label cube under a 2 x n matrix is the Minkowski sum of the
segments [-g_i, g_i]. Walking its boundary counter-clockwise from the lowest
vertex, the edge directions are the vectors +-g_i in order of angle, and
crossing the edge parallel to g_i flips the sign of coordinate i. Sorting the
2n angles therefore lists every vertex with one sign change per step.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

ANGLE_TOL = 1e-12
DEGENERATE_REL_TOL = 1e-12
BRUTE_FORCE_MAX_N = 15


@dataclass
class CandidateSweep:
    """Start labels plus the flip sequence that walks the zonotope boundary.

    ``flip_order`` lists node indices in the order they change sign.
    ``step_ends[k]`` is the number of flips applied once step ``k`` is done;
    coinciding angles make a step flip several nodes at once. The vertex
    after step ``k`` is therefore ``start_labels`` with the first
    ``step_ends[k]`` flips applied, and the final step returns to the start.
    """

    start_labels: np.ndarray
    flip_order: np.ndarray
    step_ends: np.ndarray
    degenerate_nodes: np.ndarray
    angles: np.ndarray

    @property
    def n(self) -> int:
        return self.start_labels.size

    @property
    def num_steps(self) -> int:
        return self.step_ends.size

    def vertex_offsets(self) -> np.ndarray:
        """Flip counts at which each distinct boundary vertex is reached.

        Index 0 is the start vertex; the closing step is omitted since it
        coincides with the start.
        """
        return np.concatenate([[0], self.step_ends[:-1]]) if self.num_steps else np.zeros(1, int)

    def labels_at(self, offset: int) -> np.ndarray:
        """Label vector after the first ``offset`` flips."""
        counts = np.bincount(self.flip_order[:offset], minlength=self.n)
        return np.where(counts % 2 == 1, -self.start_labels, self.start_labels).astype(np.int8)

    def iter_labels(self):
        """Yield every enumerated vertex label vector (a fresh array each time)."""
        cur = self.start_labels.copy()
        yield cur.copy()
        prev = 0
        for end in self.step_ends[:-1]:
            cur[self.flip_order[prev:end]] *= -1
            prev = end
            yield cur.copy()


def sweep_vertices(basis) -> CandidateSweep:
    """Enumerate the label vectors of the vertices of ``basis @ [-1, 1]^n``.

    ``basis`` is a 2 x n array (an :class:`~epcd.spectral.Embedding` is
    accepted too). Runs in O(n log n).
    """
    G = np.asarray(getattr(basis, "basis", basis), dtype=float)
    if G.ndim != 2 or G.shape[0] != 2:
        raise ValueError("generators must be a 2 x n array")
    n = G.shape[1]
    norms = np.hypot(G[0], G[1])
    scale = norms.max() if n else 0.0
    degenerate = norms <= DEGENERATE_REL_TOL * scale if scale > 0 else np.ones(n, bool)
    active = np.flatnonzero(~degenerate)

    ang_pos = np.arctan2(G[1, active], G[0, active])
    ang_pos = np.where(ang_pos < 0, ang_pos + 2 * np.pi, ang_pos)
    ang_neg = np.where(ang_pos < np.pi, ang_pos + np.pi, ang_pos - np.pi)

    # Lowest vertex: s_i = -sign(y_i), flat generators pointing left (-sign(x_i)),
    # which puts the walk at the left end of a horizontal bottom edge. Reading
    # the sign off the rounded angles keeps start and event order consistent.
    start = np.ones(n, dtype=np.int8)
    start[active] = np.where(ang_pos < np.pi, -1, 1)

    angles = np.concatenate([ang_pos, ang_neg])
    nodes = np.concatenate([active, active])
    order = np.argsort(angles, kind="stable")
    angles = angles[order]
    flip_order = nodes[order]

    if angles.size:
        breaks = np.flatnonzero(np.diff(angles) > ANGLE_TOL) + 1
        step_ends = np.append(breaks, angles.size)
    else:
        step_ends = np.zeros(0, dtype=np.int64)
    return CandidateSweep(start.astype(np.int8), flip_order.astype(np.int64),
                          step_ends.astype(np.int64), np.flatnonzero(degenerate), angles)


def _hull_vertices(points, tol):
    """Indices of strict extreme points of a planar point set (monotone chain)."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order].tolist()  # plain floats keep the Python loop fast
    if len(pts) == 1:
        return [order[0]]

    def turns_left(o, a, b):
        # sine of the turn angle at a, so the test does not depend on edge length
        ax, ay = a[0] - o[0], a[1] - o[1]
        bx, by = b[0] - a[0], b[1] - a[1]
        return ax * by - ay * bx > tol * math.hypot(ax, ay) * math.hypot(bx, by)

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2 and not turns_left(pts[out[-2]], pts[out[-1]], pts[i]):
                out.pop()
            out.append(i)
        return out

    lower = chain(range(len(pts)))
    upper = chain(reversed(range(len(pts))))
    hull = lower[:-1] + upper[:-1]
    if not hull:
        hull = [0, len(pts) - 1] if len(pts) > 1 else [0]
    return sorted(set(order[i] for i in hull))


def brute_force_vertices(generators, tol: float = 1e-9) -> set[tuple[int, ...]]:
    """All sign vectors whose projection is an extreme point of the hull.

    Enumerates the 2^n sign vectors, so ``n`` is capped at 15.
    """
    G = np.asarray(generators, dtype=float)
    n = G.shape[1]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    scale = np.hypot(G[0], G[1]).max() if n else 0.0
    if scale > 0:
        G = G / scale  # tolerance is relative to the longest generator
    signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int8)
    proj = signs @ G.T
    # collapse numerically identical projections before the hull test
    key = np.round(proj / tol).astype(np.int64)
    _, first, inverse = np.unique(key, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    uniq = key[first] * tol
    # rounding moves points by ~tol, so collinearity is judged with a looser angle
    ext_set = set(_hull_vertices(uniq, max(1e3 * tol, 1e-7)))
    return {tuple(int(v) for v in signs[i]) for i in range(len(signs)) if inverse[i] in ext_set}
