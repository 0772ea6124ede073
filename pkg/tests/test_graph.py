import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import SMALL
from cpkit import (
    UNREACHABLE,
    Graph,
    InputCleanupWarning,
    NotAnEdge,
    UnreachablePair,
    all_pairs_distances,
    bfs_distances,
    capacity,
    closeness_centrality,
    complete_graph,
    core_numbers,
    cycle_graph,
    degrees,
    empty_graph,
    generate_er,
    k_core,
    path_counts_excluding,
    path_graph,
    star_graph,
)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges([p for p, keep in zip(pairs, mask) if keep], n=n)


# -- degrees -----------------------------------------------------------------


def test_degrees_empty():
    assert degrees(empty_graph(3)).tolist() == [0, 0, 0]


def test_degrees_star():
    assert degrees(star_graph(5)).tolist() == [4, 1, 1, 1, 1]


def test_degrees_er_match_popcount():
    g = generate_er(50, 0.10, seed=7)
    assert degrees(g).tolist() == oracles.popcount_degrees(oracles.dense(g))


@given(graphs())
def test_graph_invariants(g):
    a = oracles.dense(g)
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert degrees(g).sum() == 2 * g.m
    for i in range(g.n):
        nb = g.neighbors(i)
        assert np.all(np.diff(nb) > 0)


def test_graph_is_immutable():
    g = path_graph(3)
    with pytest.raises(AttributeError):
        g.n = 4
    with pytest.raises(ValueError):
        g.indices[0] = 2


def test_cleanup_warns_on_loops_and_duplicates():
    with pytest.warns(InputCleanupWarning):
        g = Graph.from_edges([(0, 1), (1, 0), (2, 2), (1, 2)])
    assert g.m == 2 and g.n == 3


def test_fingerprint_tracks_structure():
    assert path_graph(4).fingerprint() == path_graph(4).fingerprint()
    assert path_graph(4).fingerprint() != cycle_graph(4).fingerprint()


# -- distances ---------------------------------------------------------------


def test_bfs_path():
    assert bfs_distances(path_graph(3), 0).dist.tolist() == [0, 1, 2]


def test_bfs_isolated():
    assert bfs_distances(empty_graph(2), 0).dist.tolist() == [0, UNREACHABLE]


def test_bfs_cycle():
    assert bfs_distances(cycle_graph(6), 0).dist.tolist() == [0, 1, 2, 3, 2, 1]


@pytest.mark.parametrize("name", sorted(SMALL))
def test_bfs_matches_floyd_warshall(name):
    g = SMALL[name]
    fw = oracles.floyd_warshall(oracles.dense(g))
    for s in range(g.n):
        assert bfs_distances(g, s).dist.tolist() == fw[s].tolist()
    assert np.array_equal(all_pairs_distances(g), fw)


@given(graphs(10))
def test_distance_properties(g):
    d = all_pairs_distances(g)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    fin = d >= 0
    for i, j, k in itertools.product(range(g.n), repeat=3):
        if fin[i, j] and fin[j, k]:
            assert fin[i, k] and d[i, k] <= d[i, j] + d[j, k]
    for s in range(g.n):
        assert np.array_equal(bfs_distances(g, s).dist, d[s])


# -- closeness ---------------------------------------------------------------


def test_closeness_star_center():
    assert closeness_centrality(star_graph(5), [0]) == pytest.approx(1.0, abs=1e-15)


def test_closeness_star_leaf():
    assert closeness_centrality(star_graph(5), [1]) == pytest.approx(4 / 7, abs=1e-15)


def test_closeness_complete():
    assert closeness_centrality(complete_graph(4), range(4)) == 1.0


def test_closeness_disconnected_raises():
    with pytest.raises(UnreachablePair):
        closeness_centrality(Graph.from_edges([(0, 1)], n=3), [0])


@pytest.mark.parametrize("name", ["P7", "C9", "barbell", "ideal_10_3", "star8"])
def test_closeness_matches_loop(name):
    g = SMALL[name]
    dist = oracles.floyd_warshall(oracles.dense(g))
    for U in ([0], [0, 1], list(range(g.n // 2)), list(range(g.n))):
        assert closeness_centrality(g, U) == pytest.approx(oracles.closeness_set(dist, U), rel=1e-14)


# -- k-cores -----------------------------------------------------------------


def test_k_core_zero_is_everything():
    g = generate_er(20, 0.1, seed=1)
    assert k_core(g, 0).tolist() == list(range(20))


def test_k_core_triangle_pendant():
    g = Graph.from_edges([(0, 1), (1, 2), (0, 2), (0, 3)])
    assert k_core(g, 2).tolist() == [0, 1, 2]


def test_k_core_above_max_degree_is_empty():
    g = generate_er(20, 0.3, seed=2)
    assert k_core(g, int(degrees(g).max()) + 1).size == 0


def _naive_k_core(a, k):
    alive = set(range(a.shape[0]))
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if sum(1 for u in alive if a[v, u]) < k:
                alive.discard(v)
                changed = True
    return sorted(alive)


@given(graphs(), st.integers(0, 6))
def test_k_core_matches_naive_peeling(g, k):
    a = oracles.dense(g)
    assert k_core(g, k).tolist() == _naive_k_core(a, k)
    assert set(k_core(g, k + 1)) <= set(k_core(g, k))


def test_core_numbers_large_graph_consistent():
    g = generate_er(300, 0.03, seed=4)
    cores = core_numbers(g)
    a = oracles.dense(g)
    for k in (1, 2, 3, 4, 5):
        assert np.flatnonzero(cores >= k).tolist() == _naive_k_core(a, k)


# -- capacity ----------------------------------------------------------------


def test_capacity_triangle():
    assert capacity(complete_graph(3)) == 3.0


def test_capacity_path():
    assert capacity(path_graph(3)) == 2.5


def test_capacity_isolated():
    assert capacity(empty_graph(2)) == 0.0


@given(graphs(10))
def test_capacity_bound_and_oracle(g):
    c = capacity(g)
    N = g.n * (g.n - 1) / 2
    assert c <= N + 1e-12
    assert (abs(c - N) < 1e-12) == (g.m == N)
    assert c == pytest.approx(oracles.capacity_from_dist(oracles.floyd_warshall(oracles.dense(g))), rel=1e-13)


def test_capacity_chunking_is_irrelevant():
    g = generate_er(60, 0.08, seed=3)
    assert capacity(g, chunk=7) == pytest.approx(capacity(g), rel=1e-14)


# -- shortest-path counting with an edge removed ---------------------------


def test_path_counts_triangle():
    sigma, through = path_counts_excluding(complete_graph(3), 1, 2)
    assert sigma == 1 and through.tolist() == [1, 0, 0]


def test_path_counts_star():
    sigma, through = path_counts_excluding(star_graph(5), 0, 3)
    assert sigma == 0 and not through.any()


def test_path_counts_c4():
    sigma, through = path_counts_excluding(cycle_graph(4), 1, 2)
    assert sigma == 1 and through.tolist() == [1, 0, 0, 1]


def test_path_counts_not_an_edge():
    with pytest.raises(NotAnEdge):
        path_counts_excluding(path_graph(3), 0, 2)


@settings(max_examples=60)
@given(graphs(9))
def test_path_counts_match_enumeration(g):
    a = oracles.dense(g)
    for j, k in g.edges():
        b = a.copy()
        b[j, k] = b[k, j] = 0
        paths = oracles.all_shortest_paths(b, int(j), int(k))
        sigma, through = path_counts_excluding(g, int(j), int(k))
        assert sigma == len(paths)
        expect = np.zeros(g.n, dtype=np.int64)
        for p in paths:
            for v in p[1:-1]:
                expect[v] += 1
        assert through.tolist() == expect.tolist()
        assert np.all(through <= sigma)
        if paths:
            assert through.sum() <= sigma * (len(paths[0]) - 2)
