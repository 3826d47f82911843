"""
Linearizing a predator-prey metapopulation
==========================================

Prey and predators live on three patches and disperse along two different
weighted triangles.  Linearize at the equilibrium and read off the
dispersal threshold.
"""
import numpy as np

from stablecut import assemble, gershgorin_conditions, linearize, spectrum_verdict, tau_threshold, trace_lower_bound
from stablecut.dynamics import rm_state, three_patch_appendix

np.set_printoptions(precision=4, suppress=True)

model, params = three_patch_appendix()
print(params)

L, E = assemble(model)
print(L)
print(np.diag(E))  # the predator loss sits inside beta

# every patch sits at the same state, so dispersal cancels
x = rm_state(params, model.m)
print(x, np.max(np.abs(model.vector_field(x))))

sys = linearize(model, x)
print(sys.coefficient_matrix)

# stable: every eigenvalue is real and negative
sv = spectrum_verdict(sys)
print(sv.eigenvalues.real, sv.stable)

# the Fiedler value each species graph needs
print("tau =", round(tau_threshold(sys), 6), "species lambda2:", sys.species_fiedler)
print("trace bound =", trace_lower_bound(sys))

# row-wise disc tests are conservative: two zero-mode rows miss
report = gershgorin_conditions(sys)
print(report.margins, report.certified)
