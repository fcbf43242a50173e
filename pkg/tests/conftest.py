import numpy as np
import pytest

from epcd.graph import from_dense


def random_dense(n, p, seed):
    rng = np.random.default_rng(seed)
    A = np.triu((rng.random((n, n)) < p).astype(int), 1)
    return A + A.T


def random_graph(n, p, seed):
    return from_dense(random_dense(n, p, seed))


def two_cliques(k1, k2, bridges=1):
    n = k1 + k2
    A = np.zeros((n, n), dtype=int)
    A[:k1, :k1] = 1
    A[k1:, k1:] = 1
    np.fill_diagonal(A, 0)
    for b in range(bridges):
        A[b, k1 + b] = A[k1 + b, b] = 1
    return from_dense(A)


@pytest.fixture
def triangle():
    return from_dense(np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]))
