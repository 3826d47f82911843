"""Stability certificates for graph partitions.

A connected graph is *stable* at threshold ``tau`` when its Fiedler value is
at least ``tau``; a partition is stable when every component is.  Besides the
exact per-component eigenvalue check, four cost-based tests are provided:

* :func:`necessary_internal_cost` - the two smallest internal costs of a
  stable component sum to at least ``tau`` (failure refutes stability).
* :func:`sufficient_external_cost` - a component whose largest external cost
  is at most ``lambda2(G) - tau`` is stable (failure proves nothing).
* :func:`zero_valuation_components` - the same test on the components left
  after deleting the nodes where the Fiedler vector vanishes.
* :func:`fiedler_sum_check` - the exact bipartition criterion built on the
  identity ``lambda2 * sum_{G1} Y = sum_{G1} E*Y - sum_{G2} E*Y``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import Disconnected, NotBipartition, TooSmall
from .graph import (
    Partition,
    connected_components,
    is_connected,
    laplacian,
)
from .spectral import eig_symmetric, fiedler

# slack for comparing an exact lambda2 with tau
LAMBDA_ATOL = 1e-9
ZERO_VALUATION_EPS = 1e-8


class Verdict(enum.Enum):
    CERTIFIED_STABLE = "CertifiedStable"
    CERTIFIED_UNSTABLE = "CertifiedUnstable"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


class SumCase(enum.IntEnum):
    POSITIVE = 1
    NEGATIVE = 2
    ZERO = 3


@dataclass(frozen=True)
class StabilityThreshold:
    tau: float

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")


@dataclass(frozen=True, eq=False)
class ComponentVerdict:
    component: tuple
    exact_lambda2: Optional[float]
    necessary_pass: Optional[bool]  # None: not applicable
    sufficient_pass: Optional[bool]
    degenerate: bool = False
    evidence: dict = field(default_factory=dict)

    @property
    def stable(self):
        """True/False from the exact check, None for singletons."""
        if self.exact_lambda2 is None:
            return None
        return self.exact_lambda2 >= self.evidence["tau"] - LAMBDA_ATOL


@dataclass(frozen=True, eq=False)
class StabilityCertificate:
    partition: Partition
    per_component: tuple
    overall: Verdict
    tau: float
    graph_lambda2: Optional[float] = None


@dataclass(frozen=True, eq=False)
class ZeroValuationResult:
    zero_set: tuple
    components: tuple
    verdicts: tuple  # ComponentVerdict per component, sufficient test only
    graph_lambda2: float
    degenerate_fiedler: bool = False

    @property
    def no_zero_set(self):
        return len(self.zero_set) == 0


@dataclass(frozen=True)
class SumCheck:
    side: int
    case: SumCase
    lhs: float
    rhs: float
    holds: bool
    zeta: float
    side_sum: float

    @property
    def indeterminate(self):
        # case 3 is an identity; it says nothing about lambda2 vs tau
        return self.case is SumCase.ZERO


def _tau(tau):
    if isinstance(tau, StabilityThreshold):
        return tau.tau
    return StabilityThreshold(float(tau)).tau


def _costs(g, where, nodes):
    """Internal and external cost arrays for ``nodes`` given a node->label map."""
    internal = np.zeros(len(nodes))
    external = np.zeros(len(nodes))
    for k, s in enumerate(nodes):
        for nb, w in g.neighbors(s).items():
            if where.get(nb) == where[s]:
                internal[k] += w
            else:
                external[k] += w
    return internal, external


def _labels(p):
    return {v: k for k, comp in enumerate(p.components) for v in comp}


def _component_lambda2(g, comp):
    if len(comp) < 2 or not is_connected(g, comp):
        return None
    return float(eig_symmetric(laplacian(g.subgraph(comp))).eigenvalues[1])


def necessary_internal_cost(g, p, tau):
    """Per component: do the two smallest internal costs sum to at least tau?

    Returns a list of True/False, or None for components of size < 2.
    Only a False answer is informative (it rules stability out).
    """
    tau = _tau(tau)
    where = _labels(p)
    out = []
    for comp in p.components:
        if len(comp) < 2:
            out.append(None)
            continue
        internal, _ = _costs(g, where, comp)
        two = np.sort(internal)[:2].sum()
        out.append(bool(two >= tau - LAMBDA_ATOL))
    return out


def sufficient_external_cost(g, p, tau, graph_lambda2=None):
    """Per component: is the largest external cost at most ``lambda2(G) - tau``?

    True certifies the component; False is inconclusive.  None for
    components of size < 2.  Raises Disconnected if ``g`` is.
    """
    tau = _tau(tau)
    if graph_lambda2 is None:
        if not is_connected(g):
            raise Disconnected("sufficient test needs lambda2 of a connected graph")
        graph_lambda2 = fiedler(g).value
    where = _labels(p)
    out = []
    for comp in p.components:
        if len(comp) < 2:
            out.append(None)
            continue
        _, external = _costs(g, where, comp)
        out.append(bool(external.max() <= graph_lambda2 - tau))
    return out


def zero_valuation_components(g, tau, eps_zero=ZERO_VALUATION_EPS):
    """Delete the nodes where the Fiedler vector vanishes and test what is left.

    A node is in the zero set when ``|Y(v)| <= eps_zero * max|Y|``.  External
    costs count every edge leaving a component, including edges into the
    deleted set.  An empty zero set gives a result with ``no_zero_set`` True.
    """
    tau = _tau(tau)
    if len(g) < 3:
        raise TooSmall("zero-valuation test needs at least three nodes")
    fp = fiedler(g)
    Y = fp.vector
    cutoff = eps_zero * np.max(np.abs(Y))
    W = tuple(v for v, y in zip(g.nodes, Y) if abs(y) <= cutoff)
    if not W:
        return ZeroValuationResult((), (), (), fp.value, fp.degenerate_fiedler)
    rest = [v for v in g.nodes if v not in set(W)]
    comps = connected_components(g, rest) if rest else []
    where = {v: k for k, comp in enumerate(comps) for v in comp}
    verdicts = []
    for comp in comps:
        _, external = _costs(g, where, comp)
        e_star = float(external.max())
        degenerate = len(comp) < 2
        verdicts.append(ComponentVerdict(
            component=comp,
            exact_lambda2=_component_lambda2(g, comp),
            necessary_pass=None,
            sufficient_pass=None if degenerate else bool(e_star <= fp.value - tau),
            degenerate=degenerate,
            evidence={"max_external_cost": e_star, "graph_lambda2": fp.value, "tau": tau},
        ))
    return ZeroValuationResult(W, tuple(comps), tuple(verdicts), fp.value, fp.degenerate_fiedler)


def _bipartition_terms(g, p, fp=None):
    if len(p.components) != 2:
        raise NotBipartition(f"expected 2 parts, got {len(p.components)}")
    if fp is None:
        fp = fiedler(g)
    where = _labels(p)
    if set(where) != set(g.nodes):
        raise NotBipartition("partition does not cover the graph")
    _, E = _costs(g, where, g.nodes)
    side = np.array([where[v] for v in g.nodes])
    return fp, E, side


def fiedler_sum_check(g, p, tau, side=0, fiedler_pair=None):
    """Exact bipartition criterion for ``lambda2(G) >= tau`` evaluated on one side.

    With ``S`` the Fiedler-vector sum over the chosen side ``G_i``:

    * ``S > 0``:  holds iff ``sum_{G_i} (E - tau) Y >= sum_{rest} E Y``
    * ``S < 0``:  same with ``<=``
    * ``S = 0``:  equality of ``sum_{G_i} E Y`` and ``sum_{rest} E Y``; true
      for every tau, so the result is flagged indeterminate.

    Sides need not be internally connected.
    """
    tau = _tau(tau)
    if not is_connected(g):
        raise Disconnected("graph must be connected")
    fp, E, labels = _bipartition_terms(g, p, fiedler_pair)
    Y = fp.vector
    mine = labels == side
    S = float(Y[mine].sum())
    zeta = 1e-9 * float(np.max(np.abs(Y))) * (1.0 + float(np.abs(E).sum()))
    rhs = float((E * Y)[~mine].sum())
    if S > zeta:
        case = SumCase.POSITIVE
        lhs = float(((E - tau) * Y)[mine].sum())
        holds = lhs >= rhs - zeta
    elif S < -zeta:
        case = SumCase.NEGATIVE
        lhs = float(((E - tau) * Y)[mine].sum())
        holds = lhs <= rhs + zeta
    else:
        case = SumCase.ZERO
        lhs = float((E * Y)[mine].sum())
        holds = abs(lhs - rhs) <= zeta
    return SumCheck(side, case, lhs, rhs, bool(holds), zeta, S)


def fiedler_identity_residual(g, p, fiedler_pair=None):
    """``|lambda2 * sum_{G1} Y - (sum_{G1} E Y - sum_{G2} E Y)|``; zero in exact arithmetic."""
    fp, E, labels = _bipartition_terms(g, p, fiedler_pair)
    Y = fp.vector
    first = labels == 0
    lhs = fp.value * Y[first].sum()
    rhs = (E * Y)[first].sum() - (E * Y)[~first].sum()
    return float(abs(lhs - rhs))


def certify_partition(g, p, tau):
    """Run the exact and cost-based tests on every component of ``p``.

    The exact lambda2 check decides the overall verdict; the cost tests are
    reported as evidence.  Singletons are flagged degenerate and make an
    otherwise stable partition Inconclusive.
    """
    tau = _tau(tau)
    n = len(g)
    connected = is_connected(g)
    graph_l2 = fiedler(g).value if connected and n >= 2 else None
    where = _labels(p)
    applicable = n >= 4

    per = []
    for comp in p.components:
        internal, external = _costs(g, where, comp)
        lam = _component_lambda2(g, comp)
        evidence = {"tau": tau, "graph_lambda2": graph_l2}
        if len(comp) >= 2:
            two = np.sort(internal)[:2]
            evidence["internal_cost_1"] = float(two[0])
            evidence["internal_cost_2"] = float(two[1])
            evidence["max_external_cost"] = float(external.max())
        else:
            evidence["max_external_cost"] = float(external.max())
        nec = suf = None
        if applicable and len(comp) >= 2:
            nec = bool(internal.min() + np.sort(internal)[1] >= tau - LAMBDA_ATOL)
            if graph_l2 is not None:
                suf = bool(external.max() <= graph_l2 - tau)
        per.append(ComponentVerdict(
            component=comp,
            exact_lambda2=lam,
            necessary_pass=nec,
            sufficient_pass=suf,
            degenerate=len(comp) < 2,
            evidence=evidence,
        ))

    if any(v.exact_lambda2 is not None and v.exact_lambda2 < tau - LAMBDA_ATOL for v in per):
        overall = Verdict.CERTIFIED_UNSTABLE
    elif all(v.exact_lambda2 is not None for v in per):
        overall = Verdict.CERTIFIED_STABLE
    else:
        overall = Verdict.INCONCLUSIVE
    return StabilityCertificate(p, tuple(per), overall, tau, graph_l2)
