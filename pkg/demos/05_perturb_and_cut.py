"""
Perturbations and cuts in time
==============================

Kick the equilibrium and integrate with RK4; then cut every dispersal link
and watch each isolated patch lose stability.
"""
import numpy as np

from stablecut import build_graph, cut_experiment, perturbation_decay
from stablecut.dynamics import RMParams, rm_state, rosenzweig_macarthur, three_patch_appendix

model, params = three_patch_appendix()
x = rm_state(params, 3)

# coupled patches pull the kick back in
res = perturbation_decay(model, x, delta=0.01, t_end=300, record_every=5000)
print("coupled ratio:", res.ratio)
print(res.trajectory.to_table(precision=6))

# one patch on its own spirals outwards
alone = RMParams(2.0, 0.2, 0.3)
patch = build_graph([], nodes=["1"])
iso = rosenzweig_macarthur(alone, patch, patch)
grow = perturbation_decay(iso, rm_state(alone, 1), delta=0.01, t_end=300, record_every=5000)
print("isolated ratio:", grow.ratio)

# cut all three links
exp = cut_experiment(model, x, [("1", "2"), ("1", "3"), ("2", "3")], t_end=100)
for c in exp.components:
    print(c.patches, np.round(c.verdict.eigenvalues, 4), round(c.decay.ratio, 3))
print("post-cut stable:", exp.post_stable)
print("with losses kept:", exp.post_stable_losses_retained)

# one link is not enough to break it
print(cut_experiment(model, x, [("1", "2")], t_end=10).post_stable)
