"""Search for cuts whose components are all stable.

Exhaustive mode enumerates every bipartition with connected sides (capped at
20 nodes) and certifies each; k-way partitions come from recursively
bipartitioning every component of every (k-1)-way candidate, so each
partition into k connected parts is reached.  Heuristic mode starts from the
sign split of the Fiedler vector, improves it with greedy single-node moves,
then keeps splitting (unstable components first) up to ``max_components``.
Neither mode claims optimality.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certify import Verdict, certify_partition, necessary_internal_cost
from .errors import Disconnected, TooLarge
from .graph import (
    Partition,
    crossing_edges,
    cut_weight,
    is_connected,
    make_partition,
)
from .spectral import fiedler

MAX_EXHAUSTIVE_NODES = 20


@dataclass(frozen=True, eq=False)
class RankedPartition:
    partition: Partition
    cut_weight: float
    certificate: object

    @property
    def min_lambda2(self):
        return min(v.exact_lambda2 for v in self.certificate.per_component)


@dataclass(frozen=True, eq=False)
class SearchReport:
    candidates_examined: int
    certified: tuple
    mode: str


@dataclass(frozen=True, eq=False)
class RefineResult:
    partition: Partition
    moves: tuple = ()
    precondition_failed: bool = False


def enumerate_bipartitions(g, max_nodes=MAX_EXHAUSTIVE_NODES):
    """Yield every bipartition of ``g`` whose two sides are non-empty and connected.

    The side holding the first canonical node always comes first; each
    bipartition appears exactly once.
    """
    n = len(g)
    if n > max_nodes:
        raise TooLarge(f"exhaustive enumeration capped at {max_nodes} nodes, got {n}")
    if not is_connected(g):
        raise Disconnected("graph must be connected")
    nodes = g.nodes
    if n < 2:
        return
    # bitmask adjacency for fast connectivity checks
    nbr = [0] * n
    for u, v, _ in g.edges():
        i, j = g.index(u), g.index(v)
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    full = (1 << n) - 1

    def connected(mask):
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                bit = f & -f
                nxt |= nbr[bit.bit_length() - 1]
                f ^= bit
            frontier = nxt & mask & ~seen
            seen |= frontier
        return seen == mask

    for rest in range(0, 1 << (n - 1)):
        side = 1 | (rest << 1)
        if side == full:
            continue
        if connected(side) and connected(full & ~side):
            a = tuple(nodes[k] for k in range(n) if side >> k & 1)
            b = tuple(nodes[k] for k in range(n) if not side >> k & 1)
            p = Partition((a, b))
            yield Partition(p.components, origin=crossing_edges(g, p))


def _rank_key(entry):
    return (entry.cut_weight, -entry.min_lambda2, sorted(entry.partition.components))


def _ranked(g, p, cert):
    return RankedPartition(p, cut_weight(g, crossing_edges(g, p)), cert)


def _split_component(g, p, k, sub):
    """Replace component ``k`` of ``p`` by the two sides of ``sub``."""
    comps = list(p.components[:k]) + list(sub.components) + list(p.components[k + 1:])
    comps.sort(key=lambda c: g.index(c[0]))
    q = Partition(tuple(comps))
    return Partition(q.components, origin=crossing_edges(g, q))


def search_stable_cuts(g, tau, mode="exhaustive", max_components=2):
    """Certified-stable partitions of ``g`` ranked by cut weight.

    Ties in cut weight go to the larger smallest-component Fiedler value.
    """
    if not is_connected(g):
        raise Disconnected("graph must be connected")
    if max_components < 2:
        raise ValueError("max_components must be >= 2")
    if mode == "exhaustive":
        examined, found = _exhaustive(g, tau, max_components)
    elif mode == "heuristic":
        examined, found = _heuristic(g, tau, max_components)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ranked = sorted(found.values(), key=_rank_key)
    return SearchReport(examined, tuple(ranked), mode)


def _exhaustive(g, tau, max_components):
    if len(g) > MAX_EXHAUSTIVE_NODES:
        raise TooLarge(f"exhaustive search capped at {MAX_EXHAUSTIVE_NODES} nodes")
    found = {}
    examined = 0

    def visit(p):
        nonlocal examined
        examined += 1
        cert = certify_partition(g, p, tau)
        if cert.overall is Verdict.CERTIFIED_STABLE:
            found[p.key()] = _ranked(g, p, cert)

    level = list(enumerate_bipartitions(g))
    for p in level:
        visit(p)
    # every partition is split further, certified or not: an unstable
    # component may still break into stable pieces
    for _ in range(max_components - 2):
        seen = {}
        for p in level:
            for k, comp in enumerate(p.components):
                if len(comp) < 2:
                    continue
                for sub in enumerate_bipartitions(g.subgraph(comp)):
                    q = _split_component(g, p, k, sub)
                    seen.setdefault(q.key(), q)
        level = list(seen.values())
        for q in level:
            visit(q)
    return examined, found


def spectral_seed(g):
    """Bipartition from the sign pattern of the Fiedler vector.

    Zero entries are tried on either side; when neither split leaves both
    sides connected, the best connected threshold split along the sorted
    Fiedler vector is used.  Returns None if no split works.
    """
    if len(g) < 2:
        return None
    Y = fiedler(g).vector
    tiny = 1e-12 * np.max(np.abs(Y))
    nodes = g.nodes
    for pos in (Y >= -tiny, Y > tiny):
        a = [v for v, keep in zip(nodes, pos) if keep]
        b = [v for v, keep in zip(nodes, pos) if not keep]
        if a and b and is_connected(g, a) and is_connected(g, b):
            return make_partition(g, [a, b])
    order = np.argsort(Y, kind="stable")
    best = None
    for k in range(1, len(nodes)):
        a = [nodes[i] for i in order[:k]]
        b = [nodes[i] for i in order[k:]]
        if is_connected(g, a) and is_connected(g, b):
            p = make_partition(g, [a, b])
            w = cut_weight(g, p.origin)
            if best is None or w < best[0]:
                best = (w, p)
    return None if best is None else best[1]


def refine_moves(g, p, tau):
    """Greedy single-node moves that shrink the cut weight.

    A node's gain is its external cost minus its internal cost.  A move is
    admissible when both sides keep at least two nodes, stay connected, and
    keep passing the internal-cost necessary test.  The largest positive gain
    is applied (ties: first canonical node) until none is left.
    """
    if len(p.components) != 2 or min(len(c) for c in p.components) < 2:
        return RefineResult(p, (), True)
    sides = [set(c) for c in p.components]
    moves = []
    while True:
        best = None
        for s in g.nodes:
            k = 0 if s in sides[0] else 1
            if len(sides[k]) <= 2:
                continue
            ext = sum(w for nb, w in g.neighbors(s).items() if nb in sides[1 - k])
            inn = sum(w for nb, w in g.neighbors(s).items() if nb in sides[k])
            gain = ext - inn
            if gain <= 0 or (best is not None and gain <= best[0]):
                continue
            src = sides[k] - {s}
            dst = sides[1 - k] | {s}
            if not (is_connected(g, src) and is_connected(g, dst)):
                continue
            trial = make_partition(g, [src, dst])
            if not all(necessary_internal_cost(g, trial, tau)):
                continue
            best = (gain, s, k)
        if best is None:
            break
        _, s, k = best
        sides[k].discard(s)
        sides[1 - k].add(s)
        moves.append(s)
    return RefineResult(make_partition(g, sides), tuple(moves), False)


def _heuristic_bipartition(g, tau):
    seed = spectral_seed(g)
    if seed is None:
        return None
    return refine_moves(g, seed, tau).partition


def _heuristic(g, tau, max_components):
    found = {}
    examined = 0
    p = _heuristic_bipartition(g, tau)
    if p is None:
        return examined, found
    examined += 1
    cert = certify_partition(g, p, tau)
    if cert.overall is Verdict.CERTIFIED_STABLE:
        found[p.key()] = _ranked(g, p, cert)
    while len(p.components) < max_components:
        # split unstable components first, larger ones before smaller
        def priority(k):
            lam = cert.per_component[k].exact_lambda2
            unstable = lam is not None and lam < tau
            return (not unstable, -len(p.components[k]), k)

        q = None
        for k in sorted(range(len(p.components)), key=priority):
            comp = p.components[k]
            if len(comp) < 2:
                continue
            sub = _heuristic_bipartition(g.subgraph(comp), tau)
            if sub is not None:
                q = _split_component(g, p, k, sub)
                break
        if q is None:
            break
        p = q
        examined += 1
        cert = certify_partition(g, p, tau)
        if cert.overall is Verdict.CERTIFIED_STABLE:
            found[p.key()] = _ranked(g, p, cert)
    return examined, found
