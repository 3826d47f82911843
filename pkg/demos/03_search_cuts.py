"""
Searching for cheap stable cuts
===============================

Enumerate connected bipartitions, keep the certified ones, rank by cut weight.
"""
from stablecut import build_graph, enumerate_bipartitions, refine_moves, search_stable_cuts
from stablecut.graph import make_partition

five = build_graph([("v1", "v2", 3), ("v2", "v3", 2), ("v3", "v4", 3),
                    ("v4", "v5", 5), ("v5", "v1", 2), ("v5", "v2", 1)])

# 10 ways to split five nodes into two connected sides
for p in enumerate_bipartitions(five):
    print(p.components)

report = search_stable_cuts(five, 3)
print(report.candidates_examined, "examined")
for r in report.certified:
    print(r.cut_weight, round(r.min_lambda2, 4), r.partition.components)

# greedy moves: v3 sits better with v4, v5
start = make_partition(five, [["v1", "v2", "v3"], ["v4", "v5"]])
print(refine_moves(five, start, 1).moves)

# three dense clusters on a chain: no split in two is stable at tau = 1,
# but splitting twice is
chain = build_graph([("a", "b", 5), ("b", "c", 5), ("a", "c", 5), ("d", "e", 5), ("e", "f", 5),
                     ("d", "f", 5), ("c", "d", 0.1), ("g", "h", 5), ("f", "g", 0.1)])
for mode in ("exhaustive", "heuristic"):
    rep = search_stable_cuts(chain, 1, mode=mode, max_components=3)
    best = rep.certified[0]
    print(mode, rep.candidates_examined, best.cut_weight, best.partition.components)
