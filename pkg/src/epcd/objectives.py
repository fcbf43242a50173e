"""Block edge counts and the two-community criteria evaluated on them.

Every criterion here depends on the labels only through
``(o11, o22, o12, n1, n2)``, so a boundary sweep can update the counts in
O(deg) per flip and evaluate criteria in O(1). Count fields may be Python
ints or equal-length integer arrays; the criteria broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass
class BlockCounts:
    o11: int
    o22: int
    o12: int
    n1: int
    n2: int

    @property
    def o1(self):
        return self.o11 + self.o12

    @property
    def o2(self):
        return self.o22 + self.o12

    @property
    def m(self):
        return self.o11 + self.o22 + 2 * self.o12

    def swapped(self) -> "BlockCounts":
        return BlockCounts(self.o22, self.o11, self.o12, self.n2, self.n1)

    def __getitem__(self, idx) -> "BlockCounts":
        return BlockCounts(*(np.asarray(getattr(self, f))[idx] for f in
                             ("o11", "o22", "o12", "n1", "n2")))

    def as_tuple(self):
        return (self.o11, self.o22, self.o12, self.n1, self.n2)


def check_labels(labels, n: int) -> np.ndarray:
    e = np.asarray(labels)
    if e.shape != (n,):
        raise ValueError(f"labels must have shape ({n},), got {e.shape}")
    if not np.all((e == 1) | (e == -1)):
        raise ValueError("labels must be +1/-1")
    return e.astype(np.int8)


def block_counts(graph: Graph, labels) -> BlockCounts:
    e = check_labels(labels, graph.n)
    pos = e == 1
    # ordered pairs (i, j) with A_ij = 1, counted by the community of each end
    rows = np.repeat(np.arange(graph.n), graph.degrees)
    cols = graph.indices
    a, b = pos[rows], pos[cols]
    o11 = int(np.count_nonzero(a & b))
    o22 = int(np.count_nonzero(~a & ~b))
    o12 = int(np.count_nonzero(a & ~b))
    n1 = int(pos.sum())
    return BlockCounts(o11, o22, o12, n1, graph.n - n1)


def flip_update(counts: BlockCounts, graph: Graph, labels: np.ndarray, i: int) -> BlockCounts:
    """Counts after flipping node ``i``; also flips ``labels[i]`` in place."""
    nb = labels[graph.neighbors(i)]
    same = int(np.count_nonzero(nb == labels[i]))
    other = nb.size - same
    if labels[i] == 1:
        new = BlockCounts(counts.o11 - 2 * same, counts.o22 + 2 * other,
                          counts.o12 + same - other, counts.n1 - 1, counts.n2 + 1)
    else:
        new = BlockCounts(counts.o11 + 2 * other, counts.o22 - 2 * same,
                          counts.o12 + same - other, counts.n1 + 1, counts.n2 - 1)
    labels[i] = -labels[i]
    return new


def sweep_counts(graph: Graph, start_labels, flip_order) -> BlockCounts:
    """Counts after each prefix of ``flip_order`` (index 0 = no flips).

    Equivalent to calling :func:`flip_update` for every flip in turn, but done
    with O(m + n) array work: the label of neighbour j when i flips at time t
    is its start label times (-1) ** (flips of j before t).
    """
    e0 = check_labels(start_labels, graph.n).astype(np.int64)
    order = np.asarray(flip_order, dtype=np.int64)
    T = order.size
    base = block_counts(graph, e0)
    if T == 0:
        return BlockCounts(*(np.array([v]) for v in base.as_tuple()))

    # times at which each node flips (sorted per node)
    by_node = np.argsort(order, kind="stable")
    flips_per_node = np.bincount(order, minlength=graph.n)
    node_ptr = np.concatenate([[0], np.cumsum(flips_per_node)])
    times = by_node  # times of node k's flips: times[node_ptr[k]:node_ptr[k+1]]

    # state of the flipping node just before each flip
    k_before = np.empty(T, dtype=np.int64)  # how many earlier flips of the same node
    k_before[by_node] = np.arange(T) - node_ptr[order[by_node]]
    own = e0[order] * np.where(k_before % 2 == 1, -1, 1)

    # expand each flip over the neighbours of the flipping node
    deg = graph.degrees
    reps = deg[order]
    t_of = np.repeat(np.arange(T), reps)
    starts = graph.indptr[order]
    offs = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
    nbrs = graph.indices[np.repeat(starts, reps) + offs]
    # flips of each neighbour strictly before time t
    cnt = np.zeros(t_of.size, dtype=np.int64)
    for k in range(int(flips_per_node.max(initial=0))):
        has = flips_per_node[nbrs] > k
        tk = np.full(t_of.size, T, dtype=np.int64)
        tk[has] = times[node_ptr[nbrs[has]] + k]
        cnt += tk < t_of
    nb_lab = e0[nbrs] * np.where(cnt % 2 == 1, -1, 1)
    same = np.bincount(t_of, weights=(nb_lab == own[t_of]), minlength=T).astype(np.int64)
    other = reps - same

    from_pos = own == 1
    d11 = np.where(from_pos, -2 * same, 2 * other)
    d22 = np.where(from_pos, 2 * other, -2 * same)
    d12 = same - other
    dn1 = np.where(from_pos, -1, 1)

    def run(v0, d):
        return np.concatenate([[v0], v0 + np.cumsum(d)])

    return BlockCounts(run(base.o11, d11), run(base.o22, d22), run(base.o12, d12),
                       run(base.n1, dn1), run(base.n2, -dn1))


def xlogx(x):
    """x log x with 0 log 0 = 0; works on scalars and arrays."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
    return out if out.ndim else float(out)


def _xlog_ratio(x, y):
    # x log(x / y) with 0 log(0 / y) = 0
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0) / np.where(y > 0, y, 1.0)), 0.0)
    return out


def _scalar(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


# Terms are grouped as (community 1 + community 2) so that swapping the two
# communities gives a bit-identical result.

def q_dc(c: BlockCounts):
    """Degree-corrected block model profile log-likelihood."""
    return _scalar((xlogx(c.o11) + xlogx(c.o22)) + 2 * xlogx(c.o12)
                   - 2 * (xlogx(c.o1) + xlogx(c.o2)))


def q_bm(c: BlockCounts):
    """Block model profile log-likelihood; -inf when a community is empty."""
    val = (q_dc(c) + 2 * (_xlog_ratio(c.o1, c.n1) + _xlog_ratio(c.o2, c.n2)))
    val = np.where((np.asarray(c.n1) == 0) | (np.asarray(c.n2) == 0), -np.inf, val)
    return _scalar(val)


def q_ng(c: BlockCounts):
    """Two-community Newman-Girvan modularity scaled by 2m."""
    o1 = np.asarray(c.o1, dtype=float)
    o2 = np.asarray(c.o2, dtype=float)
    m = o1 + o2
    if np.any(m <= 0):
        raise ValueError("modularity undefined for a graph without edges")
    return _scalar(2 * o1 * o2 / m - 2 * np.asarray(c.o12, dtype=float))


def q_ex(c: BlockCounts):
    """Community extraction criterion for community 1 (label +1)."""
    n1 = np.asarray(c.n1, dtype=float)
    n2 = np.asarray(c.n2, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = n2 / np.where(n1 > 0, n1, 1.0) * np.asarray(c.o11, dtype=float) - np.asarray(c.o12, dtype=float)
    return _scalar(np.where(n1 == 0, -np.inf, val))


CRITERIA = {"bm": q_bm, "dc": q_dc, "ng": q_ng, "ex": q_ex}
SYMMETRIC = {"bm": True, "dc": True, "ng": True, "ex": False}


def get_criterion(name: str):
    try:
        return CRITERIA[name.lower()]
    except KeyError:
        raise ValueError(f"unknown criterion {name!r}; choose from {sorted(CRITERIA)}") from None
