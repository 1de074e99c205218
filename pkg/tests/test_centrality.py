import math

import numpy as np
import pytest

from conftest import random_graph
from oracles import spearman_reference
from readnet.centrality import (adjacency_matrix, centrality_table, eigenvector_centrality,
                                rank_average, spearman)
from readnet.graph import Graph


def complete(n, loops=False):
    g = Graph()
    for i in range(n):
        g.add_vertex(f"k{i}")
    for i in range(n):
        for j in range(i + (0 if loops else 1), n):
            g.add_edge_idx(i, j, 1)
    return g


@pytest.mark.parametrize("n", [2, 3, 4, 7, 13, 30])
def test_complete_graph_uniform(n):
    res = eigenvector_centrality(complete(n))
    assert res.converged
    np.testing.assert_allclose(res.scores, 1 / math.sqrt(n), rtol=0, atol=1e-12)


def test_complete_graph_with_loops_still_uniform():
    res = eigenvector_centrality(complete(13, loops=True))
    np.testing.assert_allclose(res.scores, 1 / math.sqrt(13), rtol=0, atol=1e-12)


def test_star_converges_despite_bipartite():
    g = Graph.from_edges([("c", leaf, 1) for leaf in "xyz"])
    res = eigenvector_centrality(g)
    assert res.converged
    # eigenvector of the star K1,3: center 1/sqrt2, leaves 1/sqrt6
    assert res.scores[g.index("c")] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    for leaf in "xyz":
        assert res.scores[g.index(leaf)] == pytest.approx(1 / math.sqrt(6), abs=1e-9)


def test_adjacency_doubles_loops():
    g = Graph.from_edges([("a", "a", 3), ("a", "b", 2)])
    a = adjacency_matrix(g).toarray()
    np.testing.assert_array_equal(a, [[6, 2], [2, 0]])
    np.testing.assert_array_equal(adjacency_matrix(g, weighted=False).toarray(), [[2, 1], [1, 0]])


def dense_leading(g, weighted=True):
    vals, vecs = np.linalg.eigh(adjacency_matrix(g, weighted).toarray())
    v = vecs[:, np.argmax(vals)]
    return np.abs(v) / np.linalg.norm(v)


@pytest.mark.parametrize("weighted", [False, True])
def test_matches_dense_eigensolver(weighted):
    rng = np.random.default_rng(7 + weighted)
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 31)), p=rng.uniform(0.05, 0.5),
                         loops=0.1, weighted=weighted, connected=True)
        res = eigenvector_centrality(g, weighted=weighted)
        assert res.converged
        np.testing.assert_allclose(res.scores, dense_leading(g, weighted), rtol=0, atol=1e-6)


def test_weight_scaling_invariance(rng):
    g = random_graph(rng, 15, p=0.3, weighted=True, connected=True)
    h = Graph.from_edges([(g.labels[i], g.labels[j], 10 * w) for i, j, w in g.edges()], g.labels)
    np.testing.assert_allclose(eigenvector_centrality(g).scores, eigenvector_centrality(h).scores,
                               atol=1e-9)


def test_unit_norm_nonnegative(rng):
    g = random_graph(rng, 20, p=0.2, connected=True)
    s = eigenvector_centrality(g).scores
    assert np.linalg.norm(s) == pytest.approx(1.0, abs=1e-12)
    assert (s >= 0).all()


def test_errors():
    with pytest.raises(ValueError):
        eigenvector_centrality(Graph())
    g = Graph()
    g.add_vertex("a")
    g.add_vertex("b")
    with pytest.raises(ValueError):
        eigenvector_centrality(g)
    g = Graph.from_edges([("a", "b", 1), ("c", "d", 1)])
    with pytest.raises(ValueError, match="disconnected"):
        eigenvector_centrality(g)


def test_centrality_table_order():
    g = Graph.from_edges([("c", leaf, 1) for leaf in "zyx"])
    rows = centrality_table(g, eigenvector_centrality(g)).splitlines()
    assert [r.split("\t")[0] for r in rows] == ["c", "x", "y", "z"]


# -- Spearman ---------------------------------------------------------------

def test_rank_average_ties():
    np.testing.assert_array_equal(rank_average([10, 20, 20, 5]), [2, 3.5, 3.5, 1])


def test_spearman_hand_case():
    # ranks (1, 2.5, 2.5, 4) against (1, 2, 3, 4): cov 4.5, var 4.5 and 5
    assert spearman([1, 2, 2, 4], [10, 20, 30, 40]) == pytest.approx(4.5 / math.sqrt(22.5), abs=1e-15)


def test_spearman_matches_reference():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        n = int(rng.integers(3, 40))
        x = rng.integers(0, max(2, n // 3), n)
        y = rng.integers(0, max(2, n // 2), n)
        if len(set(x)) == 1 or len(set(y)) == 1:
            continue
        assert abs(spearman(x, y) - spearman_reference(x, y)) <= 1e-12


def test_spearman_monotone():
    x = np.arange(20.0)
    assert spearman(x, x ** 3) == 1.0
    assert spearman(x, -np.exp(x)) == -1.0


def test_spearman_symmetric(rng):
    x, y = rng.normal(size=30), rng.normal(size=30)
    assert spearman(x, y) == pytest.approx(spearman(y, x), abs=1e-15)


def test_spearman_errors():
    with pytest.raises(ValueError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])
    with pytest.raises(ValueError):
        spearman([1, 2, 3], [1, 2])
