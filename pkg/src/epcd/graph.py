"""Sparse undirected graph storage, edge-list I/O and the adjacency kernel."""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


_NODES_HEADER = re.compile(r"^\s*#\s*nodes\s+(\d+)")


class GraphFormatError(ValueError):
    """Raised when an edge list or labels file cannot be parsed."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph held as a symmetric 0/1 CSR matrix.

    ``adjacency`` has no diagonal and no duplicate entries. Treat the object as
    read-only; nothing in the package mutates it after construction.
    """

    adjacency: sp.csr_matrix
    self_loops_dropped: int = 0
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        deg = np.diff(self.adjacency.indptr).astype(np.int64)
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def total_degree(self) -> int:
        """m = sum of degrees, i.e. twice the number of edges."""
        return int(self.adjacency.indptr[-1])

    @property
    def num_edges(self) -> int:
        return self.total_degree // 2

    @property
    def indptr(self) -> np.ndarray:
        return self.adjacency.indptr

    @property
    def indices(self) -> np.ndarray:
        return self.adjacency.indices

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """Undirected edges as an (E, 2) array with ``u < v``, sorted."""
        coo = sp.triu(self.adjacency, k=1).tocoo()
        e = np.column_stack([coo.row, coo.col]).astype(np.int64)
        order = np.lexsort((e[:, 1], e[:, 0]))
        return e[order]

    def to_dense(self) -> np.ndarray:
        return self.adjacency.toarray().astype(float)

    def __eq__(self, other):
        if not isinstance(other, Graph) or other.n != self.n:
            return NotImplemented if not isinstance(other, Graph) else False
        return (self.adjacency != other.adjacency).nnz == 0

    __hash__ = None


def from_edges(n: int, edges) -> Graph:
    """Build a graph on ``n`` nodes from an iterable/array of (u, v) pairs.

    Repeated and reversed pairs collapse to one edge; self-loops are dropped
    and counted in ``Graph.self_loops_dropped``.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if e.size and (e.min() < 0 or e.max() >= n):
        raise ValueError(f"edge endpoint out of range for n={n}")
    loops = e[:, 0] == e[:, 1]
    e = e[~loops]
    u = np.minimum(e[:, 0], e[:, 1])
    v = np.maximum(e[:, 0], e[:, 1])
    if u.size:
        key = np.unique(u * n + v)
        u, v = key // n, key % n
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    adj = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
    adj.sort_indices()
    return Graph(adj, self_loops_dropped=int(loops.sum()))


def from_dense(a) -> Graph:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("adjacency must be symmetric")
    u, v = np.nonzero(np.triu(a, k=1))
    return from_edges(a.shape[0], np.column_stack([u, v]))


def _open_text(source):
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        return open(source, "r")
    if isinstance(source, str):
        return io.StringIO(source)
    return source


def load_edge_list(source) -> Graph:
    """Parse a whitespace-separated edge list.

    ``source`` is a path, a string holding the file contents, or an open text
    stream. ``#`` starts a comment. Node ids are 0-based integers and the graph
    covers ids ``0..max_id``, or more if a ``# nodes N`` header says so.
    """
    pairs = []
    declared_n = 0
    with _open_text(source) as fh:
        for lineno, line in enumerate(fh, start=1):
            hdr = _NODES_HEADER.match(line)
            if hdr:
                declared_n = int(hdr.group(1))
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected two node ids, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer node id in {line!r}") from None
            if u < 0 or v < 0:
                raise GraphFormatError(f"line {lineno}: negative node id")
            pairs.append((u, v))
    if not pairs:
        if declared_n:
            return from_edges(declared_n, [])
        raise GraphFormatError("empty edge list")
    e = np.array(pairs, dtype=np.int64)
    return from_edges(max(int(e.max()) + 1, declared_n), e)


def write_edge_list(graph: Graph, target) -> None:
    """Write one ``u v`` line per undirected edge (u < v).

    A ``# nodes N`` header keeps trailing isolated nodes across a reload.
    """
    lines = [f"# nodes {graph.n} edges {graph.num_edges}"]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            fh.write(text)
    else:
        target.write(text)


def load_labels(source) -> np.ndarray:
    """Read one label per line; {1, 2} maps to {+1, -1}, {+1, -1} is kept."""
    vals = []
    with _open_text(source) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                vals.append(int(line))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad label {line!r}") from None
    if not vals:
        raise GraphFormatError("empty labels file")
    lab = np.array(vals, dtype=np.int64)
    seen = set(np.unique(lab).tolist())
    if seen <= {1, -1}:
        return lab.astype(np.int8)
    if seen <= {1, 2}:
        return np.where(lab == 1, 1, -1).astype(np.int8)
    raise GraphFormatError(f"labels must be in {{1,2}} or {{+1,-1}}, got {sorted(seen)}")


def write_labels(labels, target) -> None:
    text = "".join(f"{int(x)}\n" for x in labels)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            fh.write(text)
    else:
        target.write(text)


def largest_connected_component(graph: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest component and the new->old id map.

    Equal-size components are resolved in favour of the one containing the
    smallest original id.
    """
    if graph.n == 0:
        raise ValueError("empty graph")
    ncomp, comp = csgraph.connected_components(graph.adjacency, directed=False)
    sizes = np.bincount(comp, minlength=ncomp)
    first = np.full(ncomp, graph.n)
    np.minimum.at(first, comp, np.arange(graph.n))
    best = min(range(ncomp), key=lambda c: (-sizes[c], first[c]))
    mapping = np.flatnonzero(comp == best)
    sub = graph.adjacency[mapping][:, mapping].tocsr()
    sub.sort_indices()
    return Graph(sub), mapping


def adjacency_matvec(graph: Graph, x) -> np.ndarray:
    """y_i = sum of x_j over neighbors j of i."""
    x = np.asarray(x)
    if x.shape[0] != graph.n:
        raise ValueError(f"vector length {x.shape[0]} != n={graph.n}")
    return graph.adjacency @ x.astype(float, copy=False)
