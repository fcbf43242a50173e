"""Comparison methods: regularized spectral clustering and leading-eigenvector signs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .graph import Graph
from .spectral import (DEFAULT_EPSILON, DEFAULT_TOL, Embedding, embedding, leading_eigenpairs,
                       regularizer_tau)

KMEANS_MAX_ITER = 300
DEFAULT_RESTARTS = 40


@dataclass
class KMeansResult:
    assignment: np.ndarray  # cluster ids in {1, 2}
    centers: np.ndarray
    inertia: float
    restarts_used: int
    degenerate: bool = False


def _lloyd(X, centers, max_iter):
    prev = None
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        if prev is not None and np.array_equal(assign, prev):
            break
        prev = assign
        for k in range(centers.shape[0]):
            members = assign == k
            if members.any():
                centers[k] = X[members].mean(axis=0)
            else:
                # re-seed an empty cluster at the worst-served point
                far = d2[np.arange(len(X)), assign].argmax()
                centers[k] = X[far]
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assign = d2.argmin(axis=1)
    for k in range(centers.shape[0]):
        if (assign == k).any():
            centers[k] = X[assign == k].mean(axis=0)
    inertia = float(((X - centers[assign]) ** 2).sum())
    return assign, centers, inertia


def kmeans(points, k: int = 2, restarts: int = DEFAULT_RESTARTS, seed=0,
           max_iter: int = KMEANS_MAX_ITER) -> KMeansResult:
    """Best-of-``restarts`` Lloyd clustering with random-point initialisation.

    Ties in inertia keep the lowest restart index.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n < k:
        raise ValueError(f"need at least {k} points, got {n}")
    if np.all(X == X[0]):
        return KMeansResult(np.ones(n, dtype=np.int64), np.repeat(X[:1], k, axis=0), 0.0,
                            0, degenerate=True)
    best = None
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(ss)
        centers = X[rng.choice(n, size=k, replace=False)].copy()
        assign, centers, inertia = _lloyd(X, centers, max_iter)
        if best is None or inertia < best[2]:
            best = (assign, centers, inertia)
    assign, centers, inertia = best
    return KMeansResult(assign + 1, centers, inertia, restarts)


def scr(graph: Graph, epsilon: float = DEFAULT_EPSILON, restarts: int = DEFAULT_RESTARTS,
        tol: float = DEFAULT_TOL, seed=0, emb: Embedding | None = None) -> np.ndarray:
    """K-means (K = 2) on the rows of the two leading eigenvectors of L_tau."""
    if graph.n == 0:
        raise ValueError("empty graph")
    if emb is None:
        emb = embedding(graph, epsilon=epsilon, tol=tol, seed=seed)
    res = kmeans(emb.eigenvectors.T, 2, restarts=restarts, seed=seed)
    return np.where(res.assignment == 1, 1, -1).astype(np.int64)


def modularity_operator(graph: Graph, tau: float) -> LinearOperator:
    """B x = A x + tau (1.x) 1 - d_tau (d_tau.x) / m_tau for A + tau 11^T."""
    n = graph.n
    d_tau = graph.degrees + n * tau
    m_tau = d_tau.sum()
    A = graph.adjacency

    def mv(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return A @ x + tau * x.sum() - d_tau * (d_tau @ x) / m_tau
        return A @ x + tau * x.sum(axis=0) - np.outer(d_tau, d_tau @ x) / m_tau

    return LinearOperator((n, n), matvec=mv, matmat=mv, dtype=float)


def les(graph: Graph, epsilon: float = DEFAULT_EPSILON, tol: float = DEFAULT_TOL,
        seed=0) -> np.ndarray:
    """Signs of the leading (largest algebraic) eigenvector of the modularity matrix."""
    if graph.total_degree == 0:
        raise ValueError("modularity needs at least one edge")
    tau = regularizer_tau(graph, epsilon)
    _, vec = leading_eigenpairs(modularity_operator(graph, tau), k=1, tol=tol, seed=seed,
                                which="LA")
    return np.where(vec[:, 0] < 0, -1, 1).astype(np.int64)
