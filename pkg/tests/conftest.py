from pathlib import Path

import numpy as np
import pytest

from stablecut import apply_cut, build_graph

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "stablecut" / "fixtures"

FIG1A_EDGES = [("v1", "v2", 3), ("v2", "v3", 2), ("v3", "v4", 3),
               ("v4", "v5", 5), ("v5", "v1", 2), ("v5", "v2", 1)]
FIG1B_EDGES = [("v1", "v2", 1), ("v2", "v3", 2), ("v3", "v4", 1), ("v4", "v1", 0.1)]
C1 = [("v2", "v3"), ("v1", "v5"), ("v2", "v5")]
C2 = [("v3", "v4"), ("v1", "v5"), ("v2", "v5")]
CB = [("v1", "v2"), ("v3", "v4")]


@pytest.fixture
def fig1a():
    return build_graph(FIG1A_EDGES)


@pytest.fixture
def fig1b():
    return build_graph(FIG1B_EDGES)


@pytest.fixture
def fig1a_c1(fig1a):
    return apply_cut(fig1a, C1)


@pytest.fixture
def fig1a_c2(fig1a):
    return apply_cut(fig1a, C2)


@pytest.fixture
def fig1b_c(fig1b):
    return apply_cut(fig1b, CB)


def fixture_path(name):
    return FIXTURES / name


def random_connected_graph(rng, n_min=2, n_max=12, extra=0.3, w_low=0.1, w_high=5.0):
    """Random spanning tree plus extra edges, all weights uniform in [w_low, w_high]."""
    n = int(rng.integers(n_min, n_max + 1))
    names = [f"n{k:02d}" for k in range(n)]
    order = rng.permutation(n)
    edges = {}
    for k in range(1, n):
        u = order[k]
        v = order[int(rng.integers(0, k))]
        edges[frozenset((u, v))] = float(rng.uniform(w_low, w_high))
    for u in range(n):
        for v in range(u + 1, n):
            if frozenset((u, v)) not in edges and rng.random() < extra:
                edges[frozenset((u, v))] = float(rng.uniform(w_low, w_high))
    triples = []
    for key, w in edges.items():
        u, v = sorted(key)
        triples.append((names[u], names[v], w))
    return build_graph(triples, nodes=names)


def random_bipartition(rng, g, connected=True, tries=200):
    """Random two-sided split; with ``connected`` both sides induce connected subgraphs."""
    from stablecut.graph import is_connected, make_partition

    nodes = list(g.nodes)
    for _ in range(tries):
        mask = rng.random(len(nodes)) < 0.5
        a = [v for v, m in zip(nodes, mask) if m]
        b = [v for v, m in zip(nodes, mask) if not m]
        if not a or not b:
            continue
        if connected and not (is_connected(g, a) and is_connected(g, b)):
            continue
        return make_partition(g, [a, b], require_connected=connected)
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
