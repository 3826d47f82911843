import networkx as nx
import numpy as np
import pytest

from stablecut import (
    Cut,
    apply_cut,
    build_graph,
    cut_weight,
    external_cost,
    internal_cost,
    is_connected,
    laplacian,
)
from stablecut.errors import DuplicateEdge, NonPositiveWeight, SelfLoop, UnknownEdge, UnknownNode
from stablecut.graph import connected_components, crossing_edges, make_partition

from conftest import C1, CB, random_bipartition, random_connected_graph


def test_build_smallest_graph():
    g = build_graph([("v1", "v2", 3)])
    assert g.nodes == ("v1", "v2")
    assert g.n_edges == 1


def test_build_fig1a(fig1a):
    assert len(fig1a) == 5
    assert fig1a.n_edges == 6
    assert fig1a.weight("v2", "v5") == 1


@pytest.mark.parametrize("edges, err", [
    ([("v1", "v1", 1)], SelfLoop),
    ([("a", "b", 1), ("b", "a", 2)], DuplicateEdge),
    ([("a", "b", 0)], NonPositiveWeight),
    ([("a", "b", -1)], NonPositiveWeight),
])
def test_build_rejects(edges, err):
    with pytest.raises(err):
        build_graph(edges)


def test_canonical_order_is_deterministic():
    a = build_graph([("z", "a", 1), ("m", "z", 2)])
    b = build_graph([("z", "m", 2), ("a", "z", 1)])
    assert a == b
    assert a.nodes == ("a", "m", "z")
    assert a.edges() == [("a", "z", 1.0), ("m", "z", 2.0)]


def test_laplacian_k2():
    g = build_graph([("v1", "v2", 3)])
    np.testing.assert_array_equal(laplacian(g), [[3, -3], [-3, 3]])


def test_laplacian_fig1b(fig1b):
    expected = [[1.1, -1, 0, -0.1], [-1, 3, -2, 0], [0, -2, 3, -1], [-0.1, 0, -1, 1.1]]
    np.testing.assert_allclose(laplacian(fig1b), expected, atol=1e-15)


def test_laplacian_single_node():
    g = build_graph([], nodes=["v1"])
    np.testing.assert_array_equal(laplacian(g), [[0.0]])


def test_is_connected(fig1a):
    assert is_connected(fig1a)
    assert not is_connected(build_graph([], nodes=["a", "b"]))
    assert is_connected(build_graph([], nodes=["a"]))


def test_apply_cut_fig1a(fig1a):
    p = apply_cut(fig1a, C1)
    assert p.components == (("v1", "v2"), ("v3", "v4", "v5"))


def test_apply_empty_cut(fig1a):
    assert apply_cut(fig1a, []).components == (fig1a.nodes,)


def test_apply_cut_fig1b(fig1b):
    assert apply_cut(fig1b, CB).components == (("v1", "v4"), ("v2", "v3"))


def test_apply_cut_unknown_edge(fig1a):
    with pytest.raises(UnknownEdge):
        apply_cut(fig1a, [("v1", "v3")])


def test_costs_fig1a(fig1a, fig1a_c1):
    assert internal_cost(fig1a, fig1a_c1, "v2") == 3
    assert external_cost(fig1a, fig1a_c1, "v2") == 3


def test_costs_fig1b(fig1b, fig1b_c):
    assert internal_cost(fig1b, fig1b_c, "v1") == pytest.approx(0.1)
    assert external_cost(fig1b, fig1b_c, "v2") == 1


def test_costs_isolated_and_empty_cut(fig1a):
    g = build_graph([("a", "b", 1)], nodes=["c"])
    p = apply_cut(g, [])
    assert internal_cost(g, p, "c") == 0
    whole = apply_cut(fig1a, [])
    assert all(external_cost(fig1a, whole, v) == 0 for v in fig1a.nodes)
    with pytest.raises(UnknownNode):
        internal_cost(fig1a, whole, "nope")


def test_cut_weight(fig1a, fig1b):
    # 2 + 2 + 1 from the figure
    assert cut_weight(fig1a, C1) == 5
    assert cut_weight(fig1a, Cut.of([])) == 0
    assert cut_weight(fig1b, CB) == 2


def test_make_partition_checks(fig1a):
    from stablecut.errors import Disconnected, NotBipartition

    with pytest.raises(NotBipartition):
        make_partition(fig1a, [["v1"], ["v2"]])
    with pytest.raises(Disconnected):
        make_partition(fig1a, [["v1", "v3"], ["v2", "v4", "v5"]])
    p = make_partition(fig1a, [["v1", "v3"], ["v2", "v4", "v5"]], require_connected=False)
    assert p.components[0] == ("v1", "v3")


def test_properties_on_random_graphs(rng):
    for _ in range(100):
        g = random_connected_graph(rng, extra=0.2)
        L = laplacian(g)
        assert np.allclose(L, L.T)
        assert np.max(np.abs(L.sum(axis=1))) <= 1e-12
        off = L - np.diag(np.diag(L))
        assert np.all(off <= 0)

        p = random_bipartition(rng, g, connected=False)
        if p is None:
            continue
        for s in g.nodes:
            total = internal_cost(g, p, s) + external_cost(g, p, s)
            assert total == pytest.approx(g.degree(s), abs=1e-12)
        cut = crossing_edges(g, p)
        intra = sum(w for u, v, w in g.edges() if p.component_of(u) == p.component_of(v))
        assert intra + cut_weight(g, cut) == pytest.approx(g.total_weight(), abs=1e-12)


def test_components_match_networkx(rng):
    for _ in range(50):
        g = random_connected_graph(rng, extra=0.1)
        drop = [(u, v) for u, v, _ in g.edges() if rng.random() < 0.4]
        residual = g.without_edges(drop)
        G = nx.Graph()
        G.add_nodes_from(residual.nodes)
        G.add_edges_from((u, v) for u, v, _ in residual.edges())
        ours = sorted(connected_components(residual))
        theirs = sorted(tuple(sorted(c)) for c in nx.connected_components(G))
        assert ours == theirs
        assert (len(apply_cut(residual, []).components) == 1) == is_connected(residual)
