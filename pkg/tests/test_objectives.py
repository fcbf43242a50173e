import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epcd.graph import from_dense, from_edges
from epcd.objectives import (BlockCounts, CRITERIA, SYMMETRIC, block_counts, flip_update,
                             get_criterion, q_bm, q_dc, q_ex, q_ng, sweep_counts, xlogx)

from conftest import random_dense, random_graph


# -- dense oracles written directly from the generic K-community definitions --

def dense_counts(A, e):
    one = np.ones(len(e))
    o11 = (one + e) @ A @ (one + e) / 4
    o22 = (one - e) @ A @ (one - e) / 4
    o12 = (one + e) @ A @ (one - e) / 4
    return o11, o22, o12


def block_matrix(A, e):
    z = [e == 1, e == -1]
    O = np.array([[A[np.ix_(z[k], z[l])].sum() for l in range(2)] for k in range(2)], float)
    return O, np.array([z[0].sum(), z[1].sum()], float)


def generic_bm(O, nk):
    return sum(O[k, l] * np.log(O[k, l] / (nk[k] * nk[l]))
               for k in range(2) for l in range(2) if O[k, l] > 0)


def generic_dc(O):
    Ok = O.sum(axis=1)
    return sum(O[k, l] * np.log(O[k, l] / (Ok[k] * Ok[l]))
               for k in range(2) for l in range(2) if O[k, l] > 0)


def generic_ng(O):
    m = O.sum()
    Ok = O.sum(axis=1)
    return sum(O[k, k] - Ok[k] ** 2 / m for k in range(2)) / (2 * m)


def extraction_oracle(A, inside):
    V, Vc = inside, ~inside
    size, rest = V.sum(), Vc.sum()
    OV = A[np.ix_(V, V)].sum()
    BV = A[np.ix_(V, Vc)].sum()
    return size * rest * (OV / size ** 2 - BV / (size * rest))


def random_labels(n, seed, balanced=True):
    rng = np.random.default_rng(seed)
    e = rng.choice([-1, 1], size=n)
    if balanced:
        e[0], e[1] = 1, -1
    return e


# -- block counts --

def test_triangle_counts(triangle):
    c = block_counts(triangle, [1, 1, -1])
    assert c.as_tuple() == (2, 0, 2, 2, 1)
    assert c.o11 + c.o22 + 2 * c.o12 == 6 == c.m


def test_all_one_labels_put_everything_in_o11():
    g = random_graph(30, 0.2, 1)
    c = block_counts(g, np.ones(30))
    assert c.as_tuple() == (g.total_degree, 0, 0, 30, 0)


@pytest.mark.parametrize("seed", range(4))
def test_counts_match_quadratic_forms(seed):
    A = random_dense(60, 0.1, seed)
    e = random_labels(60, seed + 10)
    c = block_counts(random_graph(60, 0.1, seed), e)
    assert (c.o11, c.o22, c.o12) == tuple(int(v) for v in dense_counts(A, e))
    assert c.o1 == A[e == 1].sum() and c.o2 == A[e == -1].sum()
    assert c.o11 % 2 == 0 and c.o22 % 2 == 0


@pytest.mark.parametrize("bad", [[1, 0, -1], [1, 2, -1], [1, 1]])
def test_bad_labels_rejected(triangle, bad):
    with pytest.raises(ValueError):
        block_counts(triangle, bad)


# -- single flips and sweeps --

def test_flip_matches_recount(triangle):
    e = np.ones(3, dtype=np.int8)
    c = flip_update(block_counts(triangle, e), triangle, e, 2)
    assert list(e) == [1, 1, -1]
    assert c == block_counts(triangle, [1, 1, -1])
    assert (c.o11, c.o22, c.o12) == (2, 0, 2)


def test_isolated_flip_only_moves_sizes():
    g = from_edges(4, [(0, 1), (1, 2)])
    e = np.array([1, -1, 1, 1], dtype=np.int8)
    before = block_counts(g, e)
    after = flip_update(before, g, e, 3)
    assert (after.o11, after.o22, after.o12) == (before.o11, before.o22, before.o12)
    assert (after.n1, after.n2) == (before.n1 - 1, before.n2 + 1)


@pytest.mark.parametrize("seed", range(3))
def test_random_flip_sequence_matches_recount(seed):
    g = random_graph(100, 0.08, seed)
    rng = np.random.default_rng(seed)
    e = rng.choice([-1, 1], size=100).astype(np.int8)
    c = block_counts(g, e)
    for i in rng.integers(0, 100, size=200):
        c = flip_update(c, g, e, int(i))
        assert c == block_counts(g, e)
        assert c.o11 + c.o22 + 2 * c.o12 == g.total_degree


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10_000), st.lists(st.integers(0, 10**6), max_size=80))
def test_sweep_counts_equal_sequential_flips(n, seed, raw_order):
    g = random_graph(n, 0.3, seed)
    order = np.array([i % n for i in raw_order], dtype=np.int64)
    e = random_labels(n, seed)
    batch = sweep_counts(g, e, order)
    lab = e.astype(np.int8).copy()
    c = block_counts(g, lab)
    assert batch[0] == c
    for t, i in enumerate(order, start=1):
        c = flip_update(c, g, lab, int(i))
        assert batch[t] == c


# -- criteria on worked values --

def test_qdc_worked_value():
    c = BlockCounts(4, 4, 4, 3, 3)
    expected = 4 * np.log(4) * 2 + 8 * np.log(4) - 32 * np.log(8)
    assert q_dc(c) == pytest.approx(expected, rel=1e-12)
    assert q_dc(c) == pytest.approx(-44.3614, abs=1e-4)


def test_qdc_single_community():
    m = 58
    assert q_dc(BlockCounts(m, 0, 0, 10, 0)) == pytest.approx(-m * np.log(m), rel=1e-12)


def test_qng_worked_values():
    assert q_ng(BlockCounts(6, 6, 2, 5, 5)) == pytest.approx(4.0)
    assert q_ng(BlockCounts(20, 0, 0, 7, 0)) == 0.0


def test_qex_worked_value():
    assert q_ex(BlockCounts(4, 10, 1, 2, 8)) == pytest.approx(15.0)


@pytest.mark.parametrize("fn", [q_bm, q_ex])
def test_empty_first_community_is_sentinel(fn):
    assert fn(BlockCounts(0, 12, 0, 0, 5)) == -np.inf


def test_bm_empty_second_community_is_sentinel():
    assert q_bm(BlockCounts(12, 0, 0, 5, 0)) == -np.inf


def test_ng_rejects_empty_graph():
    with pytest.raises(ValueError):
        q_ng(BlockCounts(0, 0, 0, 3, 2))


def test_xlogx_zero_convention():
    assert xlogx(0) == 0.0
    assert np.allclose(xlogx(np.array([0.0, 1.0, np.e])), [0.0, 0.0, np.e])


# -- criteria against the generic definitions --

@pytest.mark.parametrize("seed", range(6))
def test_two_community_forms_match_generic(seed):
    A = random_dense(50, 0.15, seed)
    e = random_labels(50, seed + 100)
    g = random_graph(50, 0.15, seed)
    c = block_counts(g, e)
    O, nk = block_matrix(A, e)
    m = A.sum()
    assert q_bm(c) == pytest.approx(generic_bm(O, nk), rel=1e-10)
    assert q_dc(c) == pytest.approx(generic_dc(O), rel=1e-10)
    assert q_ng(c) == pytest.approx(2 * m * generic_ng(O), rel=1e-10, abs=1e-9)
    assert q_ex(c) == pytest.approx(extraction_oracle(A, e == 1), rel=1e-10, abs=1e-9)


def test_criteria_broadcast_over_arrays():
    g = random_graph(40, 0.2, 3)
    e = random_labels(40, 3)
    order = np.arange(40)
    batch = sweep_counts(g, e, order)
    for name, fn in CRITERIA.items():
        vals = fn(batch)
        assert vals.shape == (41,)
        for t in (0, 5, 17):
            assert vals[t] == fn(batch[t]) or (np.isinf(vals[t]) and np.isinf(fn(batch[t])))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 30), st.integers(0, 10_000))
def test_label_swap_symmetry(n, seed):
    g = random_graph(n, 0.3, seed)
    if g.total_degree == 0:
        return
    e = random_labels(n, seed)
    c, s = block_counts(g, e), block_counts(g, -e)
    assert s == c.swapped()
    for name, fn in CRITERIA.items():
        if SYMMETRIC[name]:
            assert fn(c) == fn(s)


def test_extraction_is_not_symmetric():
    A = np.zeros((6, 6), int)
    A[:3, :3] = 1
    np.fill_diagonal(A, 0)
    A[2, 3] = A[3, 2] = 1
    A[4, 5] = A[5, 4] = 1
    g = from_dense(A)
    e = np.array([1, 1, 1, -1, -1, -1])
    assert q_ex(block_counts(g, e)) != q_ex(block_counts(g, -e))


def test_get_criterion():
    assert get_criterion("BM") is q_bm
    with pytest.raises(ValueError, match="unknown criterion"):
        get_criterion("foo")
