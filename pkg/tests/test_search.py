from itertools import combinations

import networkx as nx
import pytest

from stablecut import build_graph, certify_partition, enumerate_bipartitions, refine_moves, search_stable_cuts
from stablecut.certify import Verdict
from stablecut.errors import Disconnected, TooLarge
from stablecut.graph import make_partition
from stablecut.search import spectral_seed

from conftest import random_connected_graph


def brute_force_bipartitions(g):
    G = nx.Graph()
    G.add_nodes_from(g.nodes)
    G.add_edges_from((u, v) for u, v, _ in g.edges())
    first, rest = g.nodes[0], g.nodes[1:]
    out = set()
    for k in range(len(rest)):
        for extra in combinations(rest, k):
            a = {first, *extra}
            b = set(g.nodes) - a
            if nx.is_connected(G.subgraph(a)) and nx.is_connected(G.subgraph(b)):
                out.add((tuple(sorted(a)), tuple(sorted(b))))
    return out


def test_enumeration_fig1a(fig1a):
    parts = list(enumerate_bipartitions(fig1a))
    assert len(parts) == 10
    assert {p.components for p in parts} == brute_force_bipartitions(fig1a)


def test_enumeration_matches_brute_force(rng):
    for _ in range(30):
        g = random_connected_graph(rng, n_max=9, extra=0.2)
        parts = [p.components for p in enumerate_bipartitions(g)]
        assert len(parts) == len(set(parts))
        assert set(parts) == brute_force_bipartitions(g)


def test_enumeration_limits():
    big = build_graph([(f"n{k:02d}", f"n{k + 1:02d}", 1) for k in range(24)])
    with pytest.raises(TooLarge):
        list(enumerate_bipartitions(big))
    with pytest.raises(TooLarge):
        search_stable_cuts(big, 0.1)
    with pytest.raises(Disconnected):
        search_stable_cuts(build_graph([("a", "b", 1), ("c", "d", 1)]), 0.1)


def test_search_fig1a_tau3(fig1a):
    report = search_stable_cuts(fig1a, 3)
    assert report.candidates_examined == 10
    comps = [r.partition.components for r in report.certified]
    assert comps == [(("v1", "v2"), ("v3", "v4", "v5")), (("v1", "v2", "v5"), ("v3", "v4"))]
    assert [r.cut_weight for r in report.certified] == [5, 7]


def test_search_fig1b(fig1b):
    report = search_stable_cuts(fig1b, 0.5)
    assert [r.partition.components for r in report.certified] == [(("v1", "v2"), ("v3", "v4"))]
    assert report.certified[0].cut_weight == pytest.approx(2.1)


def test_search_tau0_lists_all_bipartitions_with_certified_sides(fig1a):
    report = search_stable_cuts(fig1a, 0)
    # singleton sides stay Inconclusive; every other split is certified
    multi = [p for p in enumerate_bipartitions(fig1a) if min(map(len, p.components)) >= 2]
    assert len(report.certified) == len(multi)


def test_ranking_is_sorted(rng):
    for _ in range(10):
        g = random_connected_graph(rng, n_min=5, n_max=8, extra=0.4)
        report = search_stable_cuts(g, 0.2)
        keys = [(r.cut_weight, -r.min_lambda2) for r in report.certified]
        assert keys == sorted(keys)
        for r in report.certified:
            assert certify_partition(g, r.partition, 0.2).overall is Verdict.CERTIFIED_STABLE


def brute_force_partitions(g, k):
    """Partitions of ``g`` into exactly ``k`` connected parts by label assignment."""
    from itertools import product

    G = nx.Graph()
    G.add_nodes_from(g.nodes)
    G.add_edges_from((u, v) for u, v, _ in g.edges())
    out = set()
    for labels in product(range(k), repeat=len(g)):
        parts = [[v for v, c in zip(g.nodes, labels) if c == j] for j in range(k)]
        if all(parts) and all(nx.is_connected(G.subgraph(p)) for p in parts):
            out.add(frozenset(frozenset(p) for p in parts))
    return out


def test_three_way_search(fig1a):
    report = search_stable_cuts(fig1a, 0, max_components=3)
    expected = len(brute_force_partitions(fig1a, 2)) + len(brute_force_partitions(fig1a, 3))
    assert report.candidates_examined == expected == 23
    # every 3-way split of five nodes has a singleton, so stays Inconclusive
    assert all(len(r.partition.components) == 2 for r in report.certified)
    assert len(report.certified) == 5


def test_three_way_reaches_every_partition(rng):
    for _ in range(5):
        g = random_connected_graph(rng, n_min=5, n_max=7, extra=0.3)
        report = search_stable_cuts(g, 0, max_components=3)
        expected = len(brute_force_partitions(g, 2)) + len(brute_force_partitions(g, 3))
        assert report.candidates_examined == expected


def test_three_way_found():
    # two heavy triangles joined by light edges, plus a third heavy pair
    edges = [("a", "b", 5), ("b", "c", 5), ("a", "c", 5), ("d", "e", 5), ("e", "f", 5),
             ("d", "f", 5), ("c", "d", 0.1), ("g", "h", 5), ("f", "g", 0.1)]
    g = build_graph(edges)
    report = search_stable_cuts(g, 1, max_components=3)
    best = report.certified[0]
    assert best.partition.components == (("a", "b", "c"), ("d", "e", "f"), ("g", "h"))
    assert best.cut_weight == pytest.approx(0.2)
    # no bipartition is stable here, so both modes must split past one
    assert all(len(r.partition.components) == 3 for r in report.certified)
    heur = search_stable_cuts(g, 1, mode="heuristic", max_components=3)
    assert heur.certified[0].partition.components == best.partition.components


def test_heuristic_fig1a(fig1a):
    report = search_stable_cuts(fig1a, 1, mode="heuristic")
    assert report.certified[0].partition.components == (("v1", "v2"), ("v3", "v4", "v5"))
    with pytest.raises(ValueError):
        search_stable_cuts(fig1a, 1, mode="magic")


def test_heuristic_subset_of_exhaustive(rng):
    for _ in range(20):
        g = random_connected_graph(rng, n_min=4, n_max=9, extra=0.3)
        tau = 0.3
        ex = {r.partition.key() for r in search_stable_cuts(g, tau).certified}
        heur = {r.partition.key() for r in search_stable_cuts(g, tau, mode="heuristic").certified}
        assert heur <= ex


def test_spectral_seed(fig1b):
    assert spectral_seed(fig1b).components == (("v1", "v2"), ("v3", "v4"))


def test_refine_moves(fig1a):
    start = make_partition(fig1a, [["v1", "v2", "v3"], ["v4", "v5"]])
    res = refine_moves(fig1a, start, 1)
    assert res.moves == ("v3",)
    assert res.partition.components == (("v1", "v2"), ("v3", "v4", "v5"))
    small = make_partition(fig1a, [["v1"], ["v2", "v3", "v4", "v5"]])
    assert refine_moves(fig1a, small, 1).precondition_failed
