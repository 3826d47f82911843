"""Nonlinear simulation of the metapopulation system and the predator-prey builtin."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadParams, NoConvergence, NotEquilibrium, PatchSetMismatch
from .graph import Cut, build_graph, connected_components, edge_key
from .metapop import MetapopModel, find_equilibrium, model_verdict

BLOWUP = 1e12


@dataclass(frozen=True)
class RMParams:
    """Rosenzweig-MacArthur parameters.

    gamma: prey carrying capacity; beta: predator conversion rate;
    alpha: predator mortality; l1, l2: dispersal losses of prey and predator.
    """

    gamma: float
    beta: float
    alpha: float
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0 or not self.beta > 0:
            raise BadParams("gamma and beta must be positive")
        if not 0 < self.alpha < 1:
            raise BadParams("alpha must lie in (0, 1)")
        if self.l1 < 0 or self.l2 < 0:
            raise BadParams("losses must be non-negative")
        if self.alpha + self.l2 >= 1:
            raise BadParams("alpha + l2 must be < 1 for a positive equilibrium")


def _rm_reaction(gamma, beta, alpha):
    def reaction(X):
        prey, pred = X[0], X[1]
        sat = prey / (1.0 + prey)
        return np.stack((prey * (1.0 - prey / gamma) - sat * pred,
                         beta * (sat - alpha) * pred))

    def jacobian(X):
        prey, pred = X[0], X[1]
        d = 1.0 / (1.0 + prey) ** 2
        J = np.empty((X.shape[1], 2, 2))
        J[:, 0, 0] = 1.0 - 2.0 * prey / gamma - pred * d
        J[:, 0, 1] = -prey / (1.0 + prey)
        J[:, 1, 0] = beta * pred * d
        J[:, 1, 1] = beta * (prey / (1.0 + prey) - alpha)
        return J

    def flat(x):
        m = x.size // 2
        prey, pred = x[:m], x[m:]
        sat = prey / (1.0 + prey)
        return np.concatenate((prey * (1.0 - prey / gamma) - sat * pred,
                               beta * (sat - alpha) * pred))

    return reaction, jacobian, flat


def _rm_guess(gamma, beta, alpha):
    def guess(model):
        l1, l2 = model.losses[0], model.losses[1] / beta
        a = min(alpha + l2, 0.999)
        prey = a / (1.0 - a)
        pred = (1.0 + prey) * (1.0 - l1 - prey / gamma)
        return np.concatenate((np.full(model.m, prey), np.full(model.m, pred)))
    return guess


def rosenzweig_macarthur(params, prey_graph, pred_graph):
    """Two-species model: RM predator-prey dynamics on every patch plus dispersal.

    The predator's loss enters its growth rate inside the ``beta`` factor,
    ``beta * (x1 / (1 + x1) - alpha - l2) * x2``, so the per-capita loss rate on
    the diagonal of ``E`` is ``beta * l2`` for the predator and ``l1`` for prey.
    """
    if prey_graph.nodes != pred_graph.nodes:
        raise PatchSetMismatch("prey and predator graphs must share patches")
    reaction, jac, flat = _rm_reaction(params.gamma, params.beta, params.alpha)
    return MetapopModel(
        (prey_graph, pred_graph),
        (params.l1, params.beta * params.l2),
        reaction,
        jac,
        species=("prey", "predator"),
        name="rosenzweig_macarthur",
        flat_reaction=flat,
        guess=_rm_guess(params.gamma, params.beta, params.alpha),
    )


def rm_equilibrium(params):
    """Closed-form co-existence equilibrium (prey, predator) of one patch.

    Valid for every patch of a spatially homogeneous model (dispersal terms
    vanish when all patches sit at the same state).
    """
    if not isinstance(params, RMParams):
        params = RMParams(**params)
    a = params.alpha + params.l2
    prey = a / (1.0 - a)
    pred = (1.0 + prey) * (1.0 - params.l1 - a / (params.gamma * (1.0 - a)))
    return prey, pred


def rm_state(params, m):
    """Homogeneous equilibrium stacked as a state vector for ``m`` patches."""
    prey, pred = rm_equilibrium(params)
    return np.concatenate((np.full(m, prey), np.full(m, pred)))


def three_patch_appendix():
    """The 3-patch predator-prey example with its published parameters."""
    params = RMParams(gamma=2.0, beta=0.2, alpha=0.3, l1=0.4, l2=0.2)
    prey = build_graph([("1", "2", 1.0), ("1", "3", 1.0), ("2", "3", 2.0)])
    pred = build_graph([("1", "2", 2.0), ("1", "3", 1.0), ("2", "3", 1.0)])
    return rosenzweig_macarthur(params, prey, pred), params


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    blew_up: bool = False
    labels: tuple = ()

    def to_table(self, precision=12):
        """Whitespace-separated text: time column then one column per state variable."""
        labels = self.labels or tuple(f"x{k}" for k in range(self.states.shape[1]))
        buf = io.StringIO()
        buf.write("t " + " ".join(labels) + "\n")
        for t, row in zip(self.times, self.states):
            buf.write(" ".join(f"{v:.{precision}g}" for v in (t, *row)) + "\n")
        return buf.getvalue()


def state_labels(model):
    return tuple(f"{s}@{p}" for s in model.species for p in model.patches)


def integrate(model, x0, t_end, dt, record_every=1, rhs=None):
    """Classical RK4 with fixed step ``dt``; the last step is shortened to hit ``t_end``.

    Integration stops early (``blew_up=True``) once a component leaves
    ``[-1e12, 1e12]`` or turns NaN.
    """
    if not dt > 0 or not t_end > 0:
        raise ValueError("dt and t_end must be positive")
    if rhs is None:
        local, M = model.local_rhs, model.dispersal_matrix
        if model.flat_reaction is not None:
            local = model.flat_reaction

        def rhs(y):
            return local(y) - M @ y

    f = rhs
    x = np.asarray(x0, dtype=float).copy()
    n_full = int(math.floor(t_end / dt + 1e-9))
    rest = t_end - n_full * dt
    n_steps = n_full + (1 if rest > 1e-12 * max(1.0, t_end) else 0)
    limit = BLOWUP * BLOWUP
    times, states = [0.0], [x.copy()]
    blew_up = False
    for k in range(n_steps):
        h = dt if k < n_full else rest
        half = 0.5 * h
        k1 = f(x)
        k2 = f(x + half * k1)
        k3 = f(x + half * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        t = (k + 1) * dt if k < n_full else t_end
        # cheap screen first: sq <= limit already bounds every component
        sq = x @ x
        if not sq <= limit and not np.all(np.abs(x) <= BLOWUP):
            blew_up = True
            times.append(t)
            states.append(x.copy())
            break
        if (k + 1) % record_every == 0 or k == n_steps - 1:
            times.append(t)
            states.append(x.copy())
    return Trajectory(np.array(times), np.array(states), blew_up, state_labels(model))


def alternating_direction(size):
    u = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    return u / np.linalg.norm(u)


@dataclass(frozen=True, eq=False)
class DecayResult:
    ratio: float
    monotone_tail: bool
    trajectory: Trajectory
    delta: float

    @property
    def decaying(self):
        return self.ratio < 1.0


def perturbation_decay(model, xbar, delta=None, t_end=100.0, dt=0.01,
                       direction=None, seed=None, record_every=1):
    """Push the state off an equilibrium and measure how the offset evolves.

    The offset is ``delta * u`` with ``u`` the normalized alternating-sign
    vector (or a seeded random unit vector when ``seed`` is given).  Returns
    ``||x(t_end) - xbar|| / ||delta * u||`` and whether the offset norm is
    non-increasing over the last 20% of samples.
    """
    xbar = np.asarray(xbar, dtype=float)
    residual = float(np.max(np.abs(model.vector_field(xbar))))
    if residual > 1e-8:
        raise NotEquilibrium(f"residual {residual:.3g} exceeds 1e-8")
    if delta is None:
        delta = 1e-2 * float(np.max(np.abs(xbar)))
    if direction is not None:
        u = np.asarray(direction, dtype=float)
        u = u / np.linalg.norm(u)
    elif seed is not None:
        u = np.random.default_rng(seed).normal(size=xbar.size)
        u /= np.linalg.norm(u)
    else:
        u = alternating_direction(xbar.size)
    offset = delta * u
    traj = integrate(model, xbar + offset, t_end, dt, record_every=record_every)
    norms = np.linalg.norm(traj.states - xbar, axis=1)
    start = norms[0]
    if start > 0:
        ratio = float(norms[-1] / start)
    else:
        ratio = 0.0 if norms[-1] == 0 else np.inf
    if traj.blew_up:
        ratio = np.inf
    tail = norms[int(0.8 * (len(norms) - 1)):]
    slack = 1e-12 * (1.0 + float(np.max(np.abs(xbar))))
    monotone = bool(np.all(np.diff(tail) <= slack))
    return DecayResult(ratio, monotone, traj, float(delta))


@dataclass(frozen=True, eq=False)
class ComponentOutcome:
    patches: tuple
    model: MetapopModel
    equilibrium: Optional[np.ndarray]
    verdict: object  # SpectrumVerdict or None when no equilibrium was found
    losses_retained_verdict: object
    decay: Optional[DecayResult] = None
    note: str = ""


@dataclass(frozen=True, eq=False)
class CutExperimentResult:
    pre_verdict: object
    components: tuple = field(default_factory=tuple)

    @property
    def post_stable(self):
        return all(c.verdict is not None and c.verdict.stable for c in self.components)

    @property
    def post_stable_losses_retained(self):
        return all(c.losses_retained_verdict is not None and c.losses_retained_verdict.stable
                   for c in self.components)


def _normalize_cuts(model, cut):
    """A single cut is broadcast: each edge is removed from every species graph holding it."""
    if isinstance(cut, (list, tuple)) and len(cut) == model.n and all(
            isinstance(c, (Cut, list, tuple, set, frozenset)) and not (
                len(c) == 2 and all(isinstance(e, str) for e in c)) for c in cut):
        cuts = [c if isinstance(c, Cut) else Cut.of(c) for c in cut]
        for g, c in zip(model.species_graphs, cuts):
            c.validate(g)
        return cuts
    single = cut if isinstance(cut, Cut) else Cut.of(cut)
    cuts = []
    for key in single.removed_edges:
        if not any(key in g.weights for g in model.species_graphs):
            raise ValueError(f"cut edge {key} is not in any species graph")
    for g in model.species_graphs:
        cuts.append(Cut(frozenset(k for k in single.removed_edges if k in g.weights)))
    return cuts


def _solve_component(sub, guess):
    try:
        eq = find_equilibrium(sub, guess)
    except NoConvergence as exc:
        return None, None, str(exc)
    return eq.x, model_verdict(sub, eq.x), "" if eq.positive else "non-positive equilibrium"


def cut_experiment(model, xbar, cut, t_end=500.0, dt=0.01, delta=None, record_every=10):
    """Remove edges, then compare linear stability before and after.

    ``cut`` is one cut per species or a single cut broadcast to all species.
    Patches are grouped into components of the union of the residual species
    graphs; each component gets its own model with the local dynamics kept
    and the equilibrium re-solved from ``xbar``.

    Two post-cut verdicts are reported per component: the headline one drops
    the dispersal loss of any species that lost every dispersal link inside
    the component (nothing is dispersing), the other keeps all losses.
    """
    xbar = np.asarray(xbar, dtype=float)
    pre = model_verdict(model, xbar)
    cuts = _normalize_cuts(model, cut)
    residual = [g.without_edges(c) for g, c in zip(model.species_graphs, cuts)]
    linked = {edge_key(u, v) for g in residual for u, v, _ in g.edges()}
    union = build_graph([(u, v, 1.0) for u, v in sorted(linked)], nodes=model.patches)
    cut_model = model.with_graphs(residual)
    X = xbar.reshape(model.n, model.m)
    outcomes = []
    for comp in connected_components(union):
        sub = cut_model.restrict(comp)
        cols = [model.species_graphs[0].index(p) for p in comp]
        guess = X[:, cols].reshape(-1)
        losses = []
        for i, g in enumerate(model.species_graphs):
            had = any(nb for p in comp for nb in g.neighbors(p))
            keeps = sub.species_graphs[i].n_edges > 0
            losses.append(0.0 if had and not keeps else model.losses[i])
        adjusted = sub.with_losses(losses)
        x_adj, verdict, note = _solve_component(
            adjusted, adjusted.initial_guess() if adjusted.guess else guess)
        _, verdict_kept, _ = _solve_component(sub, sub.initial_guess() if sub.guess else guess)
        decay = None
        if x_adj is not None:
            decay = perturbation_decay(adjusted, x_adj, delta=delta, t_end=t_end, dt=dt,
                                       record_every=record_every)
        outcomes.append(ComponentOutcome(comp, adjusted, x_adj, verdict, verdict_kept, decay, note))
    return CutExperimentResult(pre, tuple(outcomes))
