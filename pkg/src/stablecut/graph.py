"""Weighted undirected graphs, Laplacians, cuts and the internal/external node costs.

Nodes are opaque strings kept in lexicographic order; row ``k`` of every matrix
built here belongs to ``graph.nodes[k]``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from .errors import (
    Disconnected,
    DuplicateEdge,
    NonPositiveWeight,
    NotBipartition,
    SelfLoop,
    UnknownEdge,
    UnknownNode,
)


def edge_key(u, v):
    """Canonical (sorted) key of the unordered pair ``{u, v}``."""
    u, v = str(u), str(v)
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable simple graph with strictly positive edge weights.

    Use :func:`build_graph` rather than calling the constructor directly.
    """

    nodes: tuple
    weights: Mapping = field(repr=False)
    _index: Mapping = field(repr=False, compare=False)
    _adj: Mapping = field(repr=False, compare=False)

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node):
        return node in self._index

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.nodes == other.nodes and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.nodes, tuple(sorted(self.weights.items()))))

    @property
    def n_edges(self):
        return len(self.weights)

    def index(self, node):
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNode(f"unknown node {node!r}") from None

    def edges(self):
        """Edges as sorted ``(u, v, w)`` triples with ``u < v``."""
        return [(u, v, w) for (u, v), w in sorted(self.weights.items())]

    def weight(self, u, v):
        return self.weights.get(edge_key(u, v), 0.0)

    def has_edge(self, u, v):
        return edge_key(u, v) in self.weights

    def neighbors(self, node):
        """Mapping neighbor -> weight."""
        self.index(node)
        return self._adj[node]

    def degree(self, node):
        return float(sum(self.neighbors(node).values()))

    def total_weight(self):
        return float(sum(self.weights.values()))

    def subgraph(self, nodes):
        """Induced subgraph on ``nodes``."""
        keep = set(nodes)
        for v in keep:
            self.index(v)
        edges = [(u, v, w) for (u, v), w in self.weights.items() if u in keep and v in keep]
        return build_graph(edges, nodes=keep)

    def without_edges(self, pairs):
        """Graph with the listed edges removed; every pair must exist."""
        drop = set()
        for u, v in pairs:
            key = edge_key(u, v)
            if key not in self.weights:
                raise UnknownEdge(f"edge {key} not in graph")
            drop.add(key)
        edges = [(u, v, w) for (u, v), w in self.weights.items() if (u, v) not in drop]
        return build_graph(edges, nodes=self.nodes)

    def adjacency(self):
        n = len(self.nodes)
        A = np.zeros((n, n))
        for (u, v), w in self.weights.items():
            i, j = self._index[u], self._index[v]
            A[i, j] = A[j, i] = w
        return A


def build_graph(edges, nodes=None):
    """Build a :class:`WeightedGraph` from ``(u, v, w)`` triples.

    ``nodes`` adds isolated nodes (needed e.g. for a one-node graph).
    Raises SelfLoop, DuplicateEdge or NonPositiveWeight on bad input.
    """
    weights = {}
    node_set = set(str(v) for v in (nodes or ()))
    for u, v, w in edges:
        u, v = str(u), str(v)
        if u == v:
            raise SelfLoop(f"self-loop on {u!r}")
        w = float(w)
        if not w > 0 or not np.isfinite(w):
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}")
        key = edge_key(u, v)
        if key in weights:
            raise DuplicateEdge(f"duplicate edge {key}")
        weights[key] = w
        node_set.update(key)
    ordered = tuple(sorted(node_set))
    adj = {v: {} for v in ordered}
    for (u, v), w in weights.items():
        adj[u][v] = w
        adj[v][u] = w
    return WeightedGraph(
        nodes=ordered,
        weights=MappingProxyType(dict(sorted(weights.items()))),
        _index=MappingProxyType({v: k for k, v in enumerate(ordered)}),
        _adj=MappingProxyType({v: MappingProxyType(nb) for v, nb in adj.items()}),
    )


def laplacian(g):
    """Weighted Laplacian: weighted degree on the diagonal, ``-w`` off it."""
    A = g.adjacency()
    return np.diag(A.sum(axis=1)) - A


def connected_components(g, nodes=None):
    """Connected components (BFS), each sorted, ordered by their first node.

    With ``nodes`` given, components of the subgraph induced by those nodes.
    """
    allowed = set(g.nodes) if nodes is None else set(nodes)
    seen = set()
    comps = []
    for start in g.nodes:
        if start not in allowed or start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        comp = []
        while queue:
            v = queue.popleft()
            comp.append(v)
            for nb in g.neighbors(v):
                if nb in allowed and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: g.index(c[0]))
    return comps


def is_connected(g, nodes=None):
    members = g.nodes if nodes is None else tuple(nodes)
    if not members:
        return True
    return len(connected_components(g, members)) == 1


@dataclass(frozen=True)
class Cut:
    """A set of edges to remove, stored as canonical pairs."""

    removed_edges: frozenset

    @classmethod
    def of(cls, pairs=()):
        return cls(frozenset(edge_key(u, v) for u, v in pairs))

    def __iter__(self):
        return iter(sorted(self.removed_edges))

    def __len__(self):
        return len(self.removed_edges)

    def validate(self, g):
        for key in self.removed_edges:
            if key not in g.weights:
                raise UnknownEdge(f"cut edge {key} not in graph")


@dataclass(frozen=True)
class Partition:
    """Disjoint node sets covering the graph; ``origin`` is the inducing cut, if any."""

    components: tuple
    origin: Optional[Cut] = None

    def __len__(self):
        return len(self.components)

    def component_of(self, node):
        for k, comp in enumerate(self.components):
            if node in comp:
                return k
        raise UnknownNode(f"node {node!r} not in partition")

    def key(self):
        """Order-independent identity used for de-duplication."""
        return frozenset(frozenset(c) for c in self.components)


def apply_cut(g, cut):
    """Partition induced by removing ``cut`` from ``g``."""
    if not isinstance(cut, Cut):
        cut = Cut.of(cut)
    cut.validate(g)
    residual = g.without_edges(cut)
    comps = connected_components(residual)
    return Partition(tuple(comps), origin=cut)


def make_partition(g, sides, require_connected=True):
    """Partition from explicit node groups.

    ``require_connected=False`` relaxes the connected-component invariant, which
    the bipartition sum test allows.
    """
    sides = [tuple(sorted(str(v) for v in s)) for s in sides]
    flat = [v for s in sides for v in s]
    if any(len(s) == 0 for s in sides):
        raise NotBipartition("empty partition side")
    if len(flat) != len(set(flat)) or set(flat) != set(g.nodes):
        raise NotBipartition("sides must be disjoint and cover every node")
    for v in flat:
        g.index(v)
    if require_connected:
        for s in sides:
            if not is_connected(g, s):
                raise Disconnected(f"partition side {s} is not connected")
    sides.sort(key=lambda c: g.index(c[0]))
    p = Partition(tuple(sides))
    return Partition(p.components, origin=crossing_edges(g, p))


def crossing_edges(g, p):
    """Cut made of every edge joining two different components of ``p``."""
    where = {v: k for k, comp in enumerate(p.components) for v in comp}
    return Cut(frozenset(key for key in g.weights if where[key[0]] != where[key[1]]))


def _split_costs(g, p, s):
    k = p.component_of(s)
    inside = p.components[k]
    internal = external = 0.0
    for nb, w in g.neighbors(s).items():
        if nb in inside:
            internal += w
        else:
            external += w
    return internal, external


def internal_cost(g, p, s):
    """Total weight of edges from ``s`` to its own component."""
    g.index(s)
    return _split_costs(g, p, s)[0]


def external_cost(g, p, s):
    """Total weight of edges from ``s`` to other components."""
    g.index(s)
    return _split_costs(g, p, s)[1]


def cut_weight(g, cut):
    if not isinstance(cut, Cut):
        cut = Cut.of(cut)
    cut.validate(g)
    return float(sum(g.weights[key] for key in cut.removed_edges))
