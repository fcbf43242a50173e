"""Regularized-Laplacian embedding used as the low-rank approximation U_A."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 0.25
DEFAULT_TOL = 1e-8
# below this size ARPACK is either inapplicable (k >= n - 1) or pointless
_DENSE_CUTOFF = 8


class EigenSolverError(RuntimeError):
    pass


@dataclass
class Embedding:
    """2 x n orthonormal basis of span{D_tau^{1/2} u_1, D_tau^{1/2} u_2}.

    ``eigenvectors`` keeps the raw Laplacian eigenvectors (2 x n) because the
    spectral-clustering baseline consumes those instead of the basis.
    """

    basis: np.ndarray
    tau: float
    epsilon: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def rotated(self, R) -> "Embedding":
        """Same embedding with rows mixed by a 2x2 orthogonal matrix."""
        return Embedding(np.asarray(R) @ self.basis, self.tau, self.epsilon,
                         self.eigenvalues, self.eigenvectors, dict(self.diagnostics))


def regularizer_tau(graph: Graph, epsilon: float = DEFAULT_EPSILON) -> float:
    """tau = epsilon * dbar / n with the observed mean degree dbar = m / n."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    n, m = graph.n, graph.total_degree
    if n == 0 or m == 0:
        raise ValueError("graph has no edges; no spectral structure to embed")
    return epsilon * (m / n) / n


def regularized_degrees(graph: Graph, tau: float) -> np.ndarray:
    return graph.degrees + graph.n * tau


def regularized_laplacian_apply(graph: Graph, tau: float, x) -> np.ndarray:
    """L_tau x without forming the dense rank-one term.

    Works column-wise when ``x`` is an (n, k) block.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape[0] != graph.n:
        raise ValueError(f"vector length {x.shape[0]} != n={graph.n}")
    s = 1.0 / np.sqrt(regularized_degrees(graph, tau))
    if x.ndim == 2:
        s = s[:, None]
    z = s * x
    return s * (graph.adjacency @ z + tau * z.sum(axis=0))


def laplacian_operator(graph: Graph, tau: float) -> LinearOperator:
    n = graph.n
    return LinearOperator((n, n), matvec=lambda v: regularized_laplacian_apply(graph, tau, v),
                          matmat=lambda v: regularized_laplacian_apply(graph, tau, v),
                          dtype=float)


def _as_operator(op, n=None):
    if isinstance(op, LinearOperator):
        return op
    if callable(op):
        if n is None:
            raise ValueError("n is required when the operator is a plain callable")
        return LinearOperator((n, n), matvec=op, dtype=float)
    return LinearOperator(np.shape(op), matvec=lambda v: op @ v, matmat=lambda v: op @ v,
                          dtype=float)


def _order(vals, which):
    if which == "LM":
        return np.lexsort((-vals, -np.abs(vals)))
    return np.argsort(-vals, kind="stable")


def leading_eigenpairs(operator, k: int = 2, tol: float = DEFAULT_TOL, seed=0,
                       which: str = "LM", n: int | None = None):
    """Leading eigenpairs of a symmetric operator.

    ``operator`` may be a dense array, a sparse matrix, a ``LinearOperator`` or
    a callable (then ``n`` is required). ``which="LM"`` orders by magnitude,
    ``"LA"`` by algebraic value. Returns ``(values, vectors)`` with vectors as
    columns; each pair satisfies ``|A v - lam v| <= tol``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if which not in ("LM", "LA"):
        raise ValueError(f"unsupported ordering {which!r}")
    A = _as_operator(operator, n)
    n = A.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds dimension {n}")

    if n <= max(_DENSE_CUTOFF, k + 1):
        M = A @ np.eye(n)
        vals, vecs = np.linalg.eigh((M + M.T) / 2)
        idx = _order(vals, which)[:k]
        vals, vecs = vals[idx], vecs[:, idx]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
        arpack_tol = tol
        vals = vecs = None
        for _attempt in range(4):
            try:
                vals, vecs = eigsh(A, k=k, which=which, tol=arpack_tol, v0=v0, maxiter=10 * n)
            except ArpackNoConvergence as exc:
                got = len(exc.eigenvalues)
                raise EigenSolverError(
                    f"eigensolver did not converge for eigenpair {got} "
                    f"(only {got} of {k} converged within {10 * n} iterations)") from None
            idx = _order(vals, which)
            vals, vecs = vals[idx], vecs[:, idx]
            res = np.linalg.norm(A @ vecs - vecs * vals, axis=0)
            if np.all(res <= tol):
                break
            # ARPACK's criterion is relative to |lambda|; tighten and restart from the estimate
            arpack_tol = max(arpack_tol * tol / res.max() * 0.5, 1e-15)
            v0 = vecs.sum(axis=1)
    res = np.linalg.norm(A @ vecs - vecs * vals, axis=0)
    bad = np.flatnonzero(res > tol)
    if bad.size:
        raise EigenSolverError(
            f"eigenpair {int(bad[0])} residual {res[bad[0]]:.3e} exceeds tol {tol:.1e}")
    # fix the sign so that results do not depend on solver internals
    for j in range(vecs.shape[1]):
        piv = np.argmax(np.abs(vecs[:, j]))
        if vecs[piv, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vals, vecs


def embedding(graph: Graph, epsilon: float = DEFAULT_EPSILON, tol: float = DEFAULT_TOL,
              seed=0) -> Embedding:
    """Compute U_A from the two leading eigenvectors of L_tau."""
    tau = regularizer_tau(graph, epsilon)
    vals, vecs = leading_eigenpairs(laplacian_operator(graph, tau), k=2, tol=tol, seed=seed)
    scaled = vecs * np.sqrt(regularized_degrees(graph, tau))[:, None]
    q, _ = np.linalg.qr(scaled)
    basis = q.T.copy()
    # keep the first row pointing along D^{1/2} u_1 rather than its negative
    for j in range(2):
        if basis[j] @ scaled[:, j] < 0:
            basis[j] = -basis[j]
    gap = abs(abs(vals[0]) - abs(vals[1]))
    diagnostics = {"eigengap": float(gap), "small_gap": bool(gap < tol)}
    if diagnostics["small_gap"]:
        log.warning("leading eigenvalues nearly coincide (gap %.2e)", gap)
    return Embedding(basis, tau, epsilon, vals, vecs.T.copy(), diagnostics)


def write_embedding_csv(emb: Embedding, target) -> None:
    """Two rows of n comma-separated values."""
    np.savetxt(target, emb.basis, delimiter=",", fmt="%.17g")
