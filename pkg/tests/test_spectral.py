import numpy as np
import pytest

from epcd.graph import from_dense, from_edges
from epcd.models import SimConfig, block_expectation, population_spectrum, sample_dcsbm
from epcd.spectral import (EigenSolverError, Embedding, embedding, leading_eigenpairs,
                           regularized_laplacian_apply, regularizer_tau)

from conftest import random_dense, random_graph


def dense_laplacian(A, tau):
    n = A.shape[0]
    At = A + tau * np.ones((n, n))
    s = 1 / np.sqrt(At.sum(axis=1))
    return s[:, None] * At * s[None, :]


def test_tau_arithmetic():
    # 300 nodes, 2250 edges -> mean degree 15
    rng = np.random.default_rng(0)
    pairs = set()
    while len(pairs) < 2250:
        u, v = sorted(rng.integers(0, 300, 2))
        if u != v:
            pairs.add((u, v))
    g = from_edges(300, sorted(pairs))
    assert g.total_degree / g.n == 15
    assert regularizer_tau(g, 0.25) == pytest.approx(0.0125, rel=1e-12)


def test_tau_blogs_sized_graph():
    rng = np.random.default_rng(1)
    pairs = set()
    while len(pairs) < 16714:
        u, v = sorted(rng.integers(0, 1222, 2))
        if u != v:
            pairs.add((u, v))
    g = from_edges(1222, sorted(pairs))
    # 0.25 * (2 * 16714 / 1222) / 1222
    assert regularizer_tau(g, 0.25) == pytest.approx(0.0055963902, rel=1e-8)


def test_tau_rejects_empty_graph_and_bad_epsilon(triangle):
    with pytest.raises(ValueError):
        regularizer_tau(from_edges(10, []), 0.25)
    for eps in (0.0, 1.0, -0.1, 2.0):
        with pytest.raises(ValueError):
            regularizer_tau(triangle, eps)


def test_laplacian_regular_graph_fixed_point():
    # 6-cycle: every degree is 2
    A = np.roll(np.eye(6, dtype=int), 1, axis=1)
    A = A + A.T
    g = from_dense(A)
    tau = 0.1
    x = np.sqrt(2 + 6 * tau) * np.ones(6)
    assert np.allclose(regularized_laplacian_apply(g, tau, x), x, atol=1e-14)


def test_laplacian_matches_dense():
    A = random_dense(30, 0.2, seed=2)
    g = from_dense(A)
    tau = 0.07
    L = dense_laplacian(A.astype(float), tau)
    X = np.random.default_rng(3).standard_normal((30, 4))
    assert np.allclose(regularized_laplacian_apply(g, tau, X), L @ X, atol=1e-12)
    assert np.allclose(regularized_laplacian_apply(g, tau, X[:, 0]), L @ X[:, 0], atol=1e-12)


def test_large_tau_tends_to_averaging_operator():
    A = random_dense(20, 0.3, seed=5)
    g = from_dense(A)
    L = np.column_stack([regularized_laplacian_apply(g, 1e6, e) for e in np.eye(20)])
    vals = np.sort(np.linalg.eigvalsh(L))[::-1]
    target = np.sort(np.linalg.eigvalsh(np.ones((20, 20)) / 20))[::-1]
    assert np.allclose(vals, target, atol=1e-5)


def test_eigenpairs_diagonal():
    vals, vecs = leading_eigenpairs(np.diag([2.0, 1.0]), k=2)
    assert np.allclose(vals, [2, 1])
    assert np.allclose(np.abs(vecs), np.eye(2))


def test_eigenpairs_block_model_closed_form():
    lam, r = 12.0, 0.3
    E = block_expectation(0.5, r, 1.0, lam, 200)
    vals, vecs = leading_eigenpairs(E, k=2, seed=1)
    assert np.allclose(vals, [lam * (1 + r) / 2, lam * (1 - r) / 2], atol=1e-8)


def test_eigenpairs_random_symmetric_vs_dense():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((100, 100))
    M = (M + M.T) / 2
    vals, vecs = leading_eigenpairs(M, k=3, tol=1e-8, seed=0)
    ref_vals, ref_vecs = np.linalg.eigh(M)
    order = np.argsort(-np.abs(ref_vals))[:3]
    assert np.allclose(vals, ref_vals[order], atol=1e-8)
    for j in range(3):
        assert abs(abs(vecs[:, j] @ ref_vecs[:, order[j]]) - 1) < 1e-7
    assert np.allclose(vecs.T @ vecs, np.eye(3), atol=1e-10)
    assert np.all(np.linalg.norm(M @ vecs - vecs * vals, axis=0) <= 1e-8)


def test_eigenpairs_largest_algebraic():
    M = np.diag([-5.0, 3.0, 1.0] + [0.1] * 20)
    vals, _ = leading_eigenpairs(M, k=1, which="LA", seed=0)
    assert vals[0] == pytest.approx(3.0)
    vals, _ = leading_eigenpairs(M, k=1, which="LM", seed=0)
    assert vals[0] == pytest.approx(-5.0)


def test_eigenpairs_deterministic_given_seed():
    M = random_dense(60, 0.2, seed=9).astype(float)
    a = leading_eigenpairs(M, k=2, seed=4)
    b = leading_eigenpairs(M, k=2, seed=4)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_eigenpairs_failure_names_index():
    M = random_dense(40, 0.2, seed=1).astype(float)
    with pytest.raises(EigenSolverError, match="eigenpair 0"):
        leading_eigenpairs(M, k=2, tol=1e-30, seed=0)


def test_embedding_orthonormal_on_random_graphs():
    for seed in range(5):
        g = random_graph(80, 0.08, seed)
        emb = embedding(g, seed=seed)
        assert np.allclose(emb.basis @ emb.basis.T, np.eye(2), atol=1e-8)
        assert emb.tau > 0


def test_embedding_complete_graph_first_row_constant():
    K4 = from_dense(np.ones((4, 4), dtype=int) - np.eye(4, dtype=int))
    emb = embedding(K4)
    first = emb.basis[0]
    assert np.allclose(first, first[0]) and abs(abs(first[0]) - 0.5) < 1e-10
    assert np.allclose(emb.basis @ emb.basis.T, np.eye(2), atol=1e-8)
    assert emb.diagnostics["eigengap"] > 0


def test_embedding_recovers_population_subspace():
    cfg = SimConfig(n=300, n1=150, r=0.3, lam=15, seed=11)
    g, labels, _ = sample_dcsbm(cfg)
    emb = embedding(g, seed=0)
    pop = population_spectrum(0.5, 0.5, 0.3, 1.0, 15, 300)
    # cosines of the principal angles between the two planes
    cosines = np.linalg.svd(pop.vectors @ emb.basis.T, compute_uv=False)
    assert np.sqrt(np.mean(cosines ** 2)) > 0.9
    assert cosines.min() > 0.85
    # rows are close to piecewise constant: within-community spread is small
    # compared with the gap between community means of the contrast direction
    contrast = pop.u2 @ emb.basis.T
    proj = contrast @ emb.basis
    a, b = proj[labels == 1], proj[labels == -1]
    assert abs(a.mean() - b.mean()) > 2 * max(a.std(), b.std())


def test_embedding_rotation_helper():
    g = random_graph(40, 0.15, 3)
    emb = embedding(g)
    th = 0.7
    R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    rot = emb.rotated(R)
    assert isinstance(rot, Embedding)
    assert np.allclose(rot.basis @ rot.basis.T, np.eye(2), atol=1e-12)
