"""
Certifying a cut
================

Remove edges, get connected components, and ask whether every component keeps
its Fiedler value above a threshold tau.
"""
from stablecut import (
    apply_cut,
    build_graph,
    certify_partition,
    fiedler_identity_residual,
    fiedler_sum_check,
    internal_cost,
    external_cost,
    zero_valuation_components,
)
from stablecut.graph import make_partition

five = build_graph([("v1", "v2", 3), ("v2", "v3", 2), ("v3", "v4", 3),
                    ("v4", "v5", 5), ("v5", "v1", 2), ("v5", "v2", 1)])

# cutting three edges leaves {v1, v2} and {v3, v4, v5}
p = apply_cut(five, [("v2", "v3"), ("v1", "v5"), ("v2", "v5")])
print(p.components)

# v2 keeps weight 3 inside its component and loses 3 to the cut
print(internal_cost(five, p, "v2"), external_cost(five, p, "v2"))

# exact component lambda2 decides; the cost tests ride along as evidence
cert = certify_partition(five, p, 3)
for v in cert.per_component:
    print(v.component, round(v.exact_lambda2, 4), "necessary:", v.necessary_pass,
          "sufficient:", v.sufficient_pass)
print("overall:", cert.overall)

# the weak ring: {v1, v4} is held together by a single 0.1 edge on each side
ring = build_graph([("v1", "v2", 1), ("v2", "v3", 2), ("v3", "v4", 1), ("v4", "v1", 0.1)])
q = apply_cut(ring, [("v1", "v2"), ("v3", "v4")])
for tau in (0.2, 0.3):
    print(tau, certify_partition(ring, q, tau).overall)

# the bipartition check needs a side whose Fiedler entries do not cancel
side = make_partition(ring, [["v1", "v2"], ["v3", "v4"]])
for tau in (0.9, 1.0):
    chk = fiedler_sum_check(ring, side, tau)
    print(tau, chk.case.name, chk.holds)

# on the symmetric split they do cancel, which tells nothing about tau
print(fiedler_sum_check(ring, q, 0.9).case.name)
print("identity residual:", fiedler_identity_residual(ring, q))

# a path has a zero Fiedler entry in the middle; drop it and test the rest
path = build_graph([("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "e", 1)])
res = zero_valuation_components(path, 0.2)
print(res.zero_set, res.components, [v.sufficient_pass for v in res.verdicts])
