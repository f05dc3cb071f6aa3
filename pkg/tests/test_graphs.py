import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquestats.graphs import (EnumerationCapError, GnpParams, Graph,
                                all_graphs, clique_count, cliques,
                                graph_probability, link_count, sample_gnp)

FIG2 = Graph.from_edges(5, [(1, 2), (2, 3), (1, 4), (3, 4), (3, 5), (4, 5)])


def brute_cliques(g, k):
    out = []
    for s in itertools.combinations(range(1, g.n + 1), k):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(s, 2)):
            out.append(s)
    return out


def test_sample_gnp_extremes():
    assert sample_gnp(GnpParams(5, 0.0, 31)).edge_count == 0
    assert sample_gnp(GnpParams(5, 1.0, 31)).edge_mask == Graph.complete(5).edge_mask


def test_sample_gnp_deterministic():
    a = sample_gnp(GnpParams(20, 0.5, 7))
    b = sample_gnp(GnpParams(20, 0.5, 7))
    assert a.edge_mask == b.edge_mask
    assert a.edge_mask != sample_gnp(GnpParams(20, 0.5, 8)).edge_mask


def test_sample_gnp_known_stream():
    # frozen draws from the documented Philox keying; a platform or library
    # change that alters the stream must be caught here
    g = sample_gnp(GnpParams(6, 0.5, 12345))
    assert g.edge_mask == 9368
    assert sorted(g.edges()) == [(1, 5), (1, 6), (2, 5), (3, 5), (4, 6)]
    assert sample_gnp(GnpParams(4, 0.3, 99), stream=2).edge_mask == 9


def test_all_graphs_counts_and_cap():
    assert sum(1 for _ in all_graphs(2)) == 2
    assert sum(1 for _ in all_graphs(3)) == 8
    with pytest.raises(EnumerationCapError):
        list(all_graphs(7))


def test_all_graphs_distinct_masks():
    masks = [g.edge_mask for g in all_graphs(4)]
    assert masks == sorted(set(masks))


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_probability_sums_to_one(n, p):
    assert math.isclose(sum(graph_probability(g, p) for g in all_graphs(n)), 1.0,
                        abs_tol=1e-12)


def test_graph_probability_examples():
    assert graph_probability(Graph.empty(3), 0.5) == 0.125
    g2 = Graph.from_edges(3, [(1, 2), (2, 3)])
    assert math.isclose(graph_probability(g2, 0.3), 0.3 ** 2 * 0.7)
    for g in all_graphs(3):
        assert graph_probability(g, 0.5) == 0.125


def test_cliques_on_k4_and_figure2():
    k4 = Graph.complete(4)
    assert cliques(k4, 3) == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    assert clique_count(k4, 3) == 4
    assert cliques(FIG2, 3) == [(3, 4, 5)]
    assert clique_count(FIG2, 2) == 6
    assert clique_count(FIG2, 4) == 0
    assert cliques(Graph.empty(4), 2) == []


def test_clique_count_matches_listing_and_brute_force():
    for g in all_graphs(4):
        for k in range(1, 5):
            cs = cliques(g, k)
            assert cs == brute_cliques(g, k)
            assert clique_count(g, k) == len(cs)


@pytest.mark.parametrize("n,k", [(6, 2), (10, 3), (12, 4)])
def test_clique_count_complete_and_empty(n, k):
    assert clique_count(Graph.complete(n), k) == math.comb(n, k)
    assert clique_count(Graph.empty(n), k) == 0


def test_link_count_examples():
    assert link_count(FIG2, (3,), 1) == 3
    assert link_count(FIG2, (3,), 2) == 1
    assert link_count(Graph.empty(4), (1, 3), 1) == 0


def brute_link(g, t, k):
    ts = set(t)
    cnt = 0
    for s in itertools.combinations([v for v in range(1, g.n + 1) if v not in ts], k):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(s, 2)) and \
           all(g.has_edge(a, b) for a in s for b in t):
            cnt += 1
    return cnt


def test_link_count_formula_even_for_nonclique_t():
    g = Graph.from_edges(5, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)])
    t = (1, 2)  # 1-2 is not an edge; the formula must count anyway
    assert not g.has_edge(1, 2)
    assert link_count(g, t, 1) == brute_link(g, t, 1) == 2
    assert link_count(g, t, 2) == brute_link(g, t, 2) == 1


def test_link_equals_link_subcomplex_for_clique_t():
    # when t is a clique, the count equals clique counting inside the
    # common-neighbour induced subgraph (exhaustive n<=5, random n<=12)
    for g in all_graphs(5):
        for t in [(1,), (2,), (1, 2), (2, 4)]:
            if not all(g.has_edge(a, b) for a, b in itertools.combinations(t, 2)):
                continue
            for k in (1, 2):
                assert link_count(g, t, k) == brute_link(g, t, k)
    for seed in range(25):
        g = sample_gnp(GnpParams(12, 0.4, 99), stream=seed)
        for t in [(1,), (3, 7), (2, 5, 9)]:
            if not all(g.has_edge(a, b) for a, b in itertools.combinations(t, 2)):
                continue
            for k in (1, 2, 3):
                assert link_count(g, t, k) == brute_link(g, t, k)


def test_text_round_trip():
    text = FIG2.to_text()
    assert text.splitlines()[0] == "5"
    assert Graph.from_text(text).edge_mask == FIG2.edge_mask


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 2)])
    with pytest.raises(ValueError):
        GnpParams(3, 1.5, 0)
    with pytest.raises(ValueError):
        GnpParams(0, 0.5, 0)


@given(st.integers(2, 12), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_adjacency_symmetric_and_loopless(n, seed):
    g = sample_gnp(GnpParams(n, 0.5, seed))
    for i in range(1, n + 1):
        assert not g.has_edge(i, i)
        for j in range(1, n + 1):
            if i != j:
                assert g.has_edge(i, j) == g.has_edge(j, i)
    assert clique_count(g, 2) == g.edge_count
