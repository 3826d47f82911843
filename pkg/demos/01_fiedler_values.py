"""
Fiedler values of small weighted networks
=========================================

Build two example networks, look at their Laplacians and compare the Jacobi
eigensolver with the bisection oracle.
"""
import numpy as np

from stablecut import build_graph, eig_symmetric, fiedler, laplacian, oracle_eigenvalues

np.set_printoptions(precision=4, suppress=True)

# a 5-node network with 6 weighted edges
five = build_graph([("v1", "v2", 3), ("v2", "v3", 2), ("v3", "v4", 3),
                    ("v4", "v5", 5), ("v5", "v1", 2), ("v5", "v2", 1)])
print(five.nodes)
print(laplacian(five))

# rows of a Laplacian sum to zero, so 0 is always an eigenvalue
dec = eig_symmetric(laplacian(five))
print("spectrum:", dec.eigenvalues, "after", dec.sweeps, "sweeps")

# the second-smallest eigenvalue measures how well connected the graph is
fp = fiedler(five)
print("lambda2 =", round(fp.value, 5))
print("Fiedler vector:", fp.vector)

# an independent path: count sign changes of leading minors and bisect
print("oracle:", oracle_eigenvalues(laplacian(five)))

# a 4-cycle with one weak link has a much smaller lambda2
ring = build_graph([("v1", "v2", 1), ("v2", "v3", 2), ("v3", "v4", 1), ("v4", "v1", 0.1)])
print("ring lambda2 =", round(fiedler(ring).value, 4))

# its Fiedler vector is antisymmetric: the ring has a mirror symmetry
print(fiedler(ring).vector)
