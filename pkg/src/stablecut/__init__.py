"""Stability certificates for cuts of weighted dispersal networks."""

__version__ = "0.1.0"

from .graph import (
    Cut,
    Partition,
    WeightedGraph,
    apply_cut,
    build_graph,
    connected_components,
    cut_weight,
    external_cost,
    internal_cost,
    is_connected,
    laplacian,
    make_partition,
)
from .spectral import eig_symmetric, fiedler, oracle_eigenvalues
from .certify import (
    Verdict,
    certify_partition,
    fiedler_identity_residual,
    fiedler_sum_check,
    necessary_internal_cost,
    sufficient_external_cost,
    zero_valuation_components,
)
from .metapop import (
    MetapopModel,
    assemble,
    find_equilibrium,
    gershgorin_conditions,
    linearize,
    spectrum_verdict,
    tau_threshold,
    trace_lower_bound,
)
from .dynamics import (
    RMParams,
    cut_experiment,
    integrate,
    perturbation_decay,
    rm_equilibrium,
    rosenzweig_macarthur,
)
from .search import enumerate_bipartitions, refine_moves, search_stable_cuts
