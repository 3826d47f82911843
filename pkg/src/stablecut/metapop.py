"""Linearized multi-species metapopulation dynamics on dispersal networks.

The state vector stacks species blocks: entry ``i * m + j`` is species ``i``
on patch ``j`` (patches in the species graphs' canonical node order).  The
full system is

    dx/dt = f(x) - L x - E x

with ``L`` the direct sum of the per-species Laplacians and ``E`` the
per-species dispersal loss on the diagonal.
"""
from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.linalg import block_diag

from .errors import (
    BadParams,
    DisconnectedSpeciesGraph,
    NoConvergence,
    PatchSetMismatch,
    SinglePatch,
)
from .graph import is_connected, laplacian
from .spectral import eig_symmetric

STABILITY_TOL = 1e-9


class NonPositiveEquilibriumWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class MetapopModel:
    """``n`` species on ``m`` patches.

    reaction : callable
        Local dynamics.  Takes ``X`` of shape ``(n, m)`` (``X[i, j]`` = species
        i on patch j) and returns the same shape.  Must be patch-local: column
        j of the output depends on column j of ``X`` only.
    reaction_jacobian : callable, optional
        ``X -> (m, n, n)`` array of per-patch Jacobians.  Central finite
        differences are used when absent.
    flat_reaction : callable, optional
        Same as ``reaction`` but on the stacked state vector; a fast path for
        long integrations.
    guess : callable, optional
        ``model -> state`` starting point for equilibrium searches on this
        model or on models derived from it.
    """

    species_graphs: tuple
    losses: tuple
    reaction: Callable
    reaction_jacobian: Optional[Callable] = None
    species: tuple = ()
    name: str = "custom"
    flat_reaction: Optional[Callable] = None
    guess: Optional[Callable] = None

    def __post_init__(self):
        graphs = tuple(self.species_graphs)
        if not graphs:
            raise BadParams("need at least one species")
        patches = graphs[0].nodes
        for g in graphs[1:]:
            if g.nodes != patches:
                raise PatchSetMismatch(f"species graphs disagree on patches: {patches} vs {g.nodes}")
        if len(patches) < 1:
            raise BadParams("need at least one patch")
        losses = tuple(float(l) for l in self.losses)
        if len(losses) != len(graphs):
            raise BadParams(f"{len(graphs)} species but {len(losses)} losses")
        if any(not l >= 0 for l in losses):
            raise BadParams(f"losses must be >= 0, got {losses}")
        species = tuple(self.species) or tuple(f"s{i + 1}" for i in range(len(graphs)))
        object.__setattr__(self, "species_graphs", graphs)
        object.__setattr__(self, "losses", losses)
        object.__setattr__(self, "species", species)

    @property
    def n(self):
        return len(self.species_graphs)

    @property
    def m(self):
        return len(self.patches)

    @property
    def patches(self):
        return self.species_graphs[0].nodes

    @cached_property
    def dispersal_matrix(self):
        """``L + E``."""
        L, E = assemble(self)
        return L + E

    def local_rhs(self, x):
        if self.flat_reaction is not None:
            return self.flat_reaction(np.asarray(x, dtype=float))
        X = np.asarray(x, dtype=float).reshape(self.n, self.m)
        return np.asarray(self.reaction(X), dtype=float).reshape(-1)

    def vector_field(self, x):
        return self.local_rhs(x) - self.dispersal_matrix @ x

    def local_jacobian(self, x):
        """``Df(x)`` as an ``(nm, nm)`` matrix."""
        n, m = self.n, self.m
        if self.reaction_jacobian is None:
            return finite_difference_jacobian(self.local_rhs, x)
        X = np.asarray(x, dtype=float).reshape(n, m)
        blocks = np.asarray(self.reaction_jacobian(X), dtype=float).reshape(m, n, n)
        J = np.zeros((n * m, n * m))
        for j in range(m):
            idx = np.arange(n) * m + j
            J[np.ix_(idx, idx)] = blocks[j]
        return J

    def full_jacobian(self, x):
        return self.local_jacobian(x) - self.dispersal_matrix

    def with_losses(self, losses):
        return dataclasses.replace(self, losses=tuple(losses))

    def with_graphs(self, graphs):
        return dataclasses.replace(self, species_graphs=tuple(graphs))

    def initial_guess(self):
        if self.guess is not None:
            return np.asarray(self.guess(self), dtype=float)
        return np.ones(self.n * self.m)

    def restrict(self, patches):
        """Same species and local dynamics on a subset of patches.

        Edges leaving the subset are dropped.  Relies on patch-locality of the
        reaction term: the sub-state is embedded into a zero full state.
        """
        patches = tuple(sorted(patches))
        cols = np.array([self.species_graphs[0].index(p) for p in patches])
        n, m = self.n, self.m
        full_react, full_jac = self.reaction, self.reaction_jacobian

        def reaction(X):
            Z = np.zeros((n, m))
            Z[:, cols] = X
            return np.asarray(full_react(Z))[:, cols]

        jac = None
        if full_jac is not None:
            def jac(X):
                Z = np.zeros((n, m))
                Z[:, cols] = X
                return np.asarray(full_jac(Z)).reshape(m, n, n)[cols]

        flat = None
        if self.flat_reaction is not None:
            full_flat = self.flat_reaction
            idx = (np.arange(n)[:, None] * m + cols[None, :]).reshape(-1)

            def flat(x):
                z = np.zeros(n * m)
                z[idx] = x
                return full_flat(z)[idx]

        graphs = tuple(g.subgraph(patches) for g in self.species_graphs)
        return MetapopModel(graphs, self.losses, reaction, jac, self.species, self.name,
                            flat_reaction=flat, guess=self.guess)


def finite_difference_jacobian(func, x):
    """Central differences with step ``1e-6 * (1 + |x_k|)``."""
    x = np.asarray(x, dtype=float)
    J = np.zeros((func(x).size, x.size))
    for k in range(x.size):
        h = 1e-6 * (1.0 + abs(x[k]))
        xp = x.copy()
        xm = x.copy()
        xp[k] += h
        xm[k] -= h
        J[:, k] = (func(xp) - func(xm)) / (2 * h)
    return J


def linear_local_dynamics(A):
    """Reaction and Jacobian for ``f(x_patch) = A_j x_patch``.

    ``A`` is one ``(n, n)`` matrix shared by all patches, or an ``(m, n, n)``
    stack with one matrix per patch.
    """
    A = np.asarray(A, dtype=float)
    per_patch = A.ndim == 3

    def reaction(X):
        if per_patch:
            return np.einsum("jik,kj->ij", A, X)
        return A @ X

    def jacobian(X):
        mm = X.shape[1]
        return A if per_patch else np.broadcast_to(A, (mm,) + A.shape)

    return reaction, jacobian


def linear_model(A, species_graphs, losses, species=()):
    reaction, jac = linear_local_dynamics(A)
    return MetapopModel(tuple(species_graphs), tuple(losses), reaction, jac, species, "linear")


def assemble(model):
    """Block Laplacian ``L`` and diagonal loss matrix ``E`` of a model."""
    L = block_diag(*[laplacian(g) for g in model.species_graphs])
    E = np.diag(np.repeat(np.asarray(model.losses, dtype=float), model.m))
    return L, E


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    x: np.ndarray
    iterations: int
    residual: float
    positive: bool


def find_equilibrium(model, guess, tol=1e-10, max_iter=100):
    """Newton iteration on ``f(x) - Lx - Ex = 0``.

    Warns (NonPositiveEquilibriumWarning) but still returns when the root is
    not component-wise positive.
    """
    x = np.asarray(guess, dtype=float).copy()
    if x.shape != (model.n * model.m,):
        raise BadParams(f"guess must have length {model.n * model.m}")
    for it in range(max_iter + 1):
        F = model.vector_field(x)
        res = float(np.max(np.abs(F))) if F.size else 0.0
        if not np.isfinite(res):
            break
        if res <= tol:
            positive = bool(np.all(x > 0))
            if not positive:
                warnings.warn("equilibrium is not component-wise positive",
                              NonPositiveEquilibriumWarning, stacklevel=2)
            return EquilibriumResult(x, it, res, positive)
        if it == max_iter:
            break
        try:
            x = x - np.linalg.solve(model.full_jacobian(x), F)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian at Newton step {it}") from exc
    raise NoConvergence(f"Newton did not reach residual {tol} in {max_iter} steps")


@dataclass(frozen=True, eq=False)
class LinearizedSystem:
    equilibrium: np.ndarray
    local_jacobian: np.ndarray      # Df(x)
    block_laplacian: np.ndarray     # L
    loss_matrix: np.ndarray         # E
    modal_matrix: np.ndarray        # P, orthonormal blocks
    modal_spectrum: np.ndarray      # diagonal of Lambda
    transformed_jacobian: np.ndarray  # P^T Df P
    coefficient_matrix: np.ndarray  # P^T Df P - Lambda - E
    zero_rows: np.ndarray           # True where the row pairs with a zero Laplacian eigenvalue
    species_fiedler: tuple          # lambda2 per species (None when m == 1)
    n: int
    m: int

    @property
    def losses(self):
        return np.diag(self.loss_matrix)

    @property
    def fiedler_min(self):
        vals = [v for v in self.species_fiedler if v is not None]
        return min(vals) if vals else None


def linearize(model, x):
    """Modal-coordinate linearization around ``x``.

    Each species block of ``P`` holds orthonormal Laplacian eigenvectors in
    ascending eigenvalue order, so ``P^T`` stands in for ``P^-1``.  Raises
    DisconnectedSpeciesGraph if a species graph is disconnected.
    """
    x = np.asarray(x, dtype=float)
    n, m = model.n, model.m
    if x.shape != (n * m,):
        raise BadParams(f"state must have length {n * m}")
    blocks, spectra, fied = [], [], []
    for i, g in enumerate(model.species_graphs):
        if not is_connected(g):
            raise DisconnectedSpeciesGraph(f"dispersal graph of species {model.species[i]!r} is disconnected")
        dec = eig_symmetric(laplacian(g))
        blocks.append(dec.eigenvectors)
        spectra.append(dec.eigenvalues)
        fied.append(float(dec.eigenvalues[1]) if m >= 2 else None)
    P = block_diag(*blocks)
    Lam = np.concatenate(spectra)
    L, E = assemble(model)
    Df = model.local_jacobian(x)
    T = P.T @ Df @ P
    coef = T - np.diag(Lam) - E
    zero_rows = np.zeros(n * m, dtype=bool)
    zero_rows[np.arange(n) * m] = True
    return LinearizedSystem(x, Df, L, E, P, Lam, T, coef, zero_rows, tuple(fied), n, m)


@dataclass(frozen=True, eq=False)
class SpectrumVerdict:
    eigenvalues: np.ndarray  # complex, sorted by (real, imag)
    stable: bool
    max_real: float


def _sorted_complex(w):
    w = np.asarray(w, dtype=complex)
    return w[np.lexsort((w.imag, w.real))]


def matrix_verdict(J, tol=STABILITY_TOL):
    """Eigenvalues of a general real matrix; stable iff max real part <= tol."""
    J = np.asarray(J, dtype=float)
    if J.size == 0:
        return SpectrumVerdict(np.zeros(0, dtype=complex), True, -np.inf)
    try:
        w = np.linalg.eigvals(J)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence("general eigenvalue iteration failed") from exc
    w = _sorted_complex(w)
    max_real = float(np.max(w.real))
    return SpectrumVerdict(w, bool(max_real <= tol), max_real)


def spectrum_verdict(sys, tol=STABILITY_TOL):
    """Stability from the spectrum of ``Df - L - E`` (similar to the coefficient matrix)."""
    return matrix_verdict(sys.local_jacobian - sys.block_laplacian - sys.loss_matrix, tol)


def model_verdict(model, x, tol=STABILITY_TOL):
    """Same as :func:`spectrum_verdict` without the modal transform (no connectivity needed)."""
    return matrix_verdict(model.full_jacobian(x), tol)


@dataclass(frozen=True, eq=False)
class GershgorinReport:
    cond1: dict  # row -> bool, zero rows
    cond2: dict  # row -> bool, positive rows
    margins: np.ndarray  # left side minus right side per row
    lambda2: Optional[float]

    @property
    def certified(self):
        return all(self.cond1.values()) and all(self.cond2.values())


def _offdiag_abs_sums(T):
    return np.sum(np.abs(T), axis=1) - np.abs(np.diag(T))


def gershgorin_conditions(sys):
    """Disc-based sufficient stability conditions, row by row.

    Zero row q:      l_q - T_qq >= sum_{r != q} |T_qr|
    Positive row s:  lambda2 + l_s - T_ss >= sum_{t != s} |T_st|

    with ``T = P^T Df P`` and lambda2 the smallest species Fiedler value.
    """
    T = sys.transformed_jacobian
    off = _offdiag_abs_sums(T)
    diag = np.diag(T)
    l = sys.losses
    lam2 = sys.fiedler_min
    margins = np.empty(len(diag))
    cond1, cond2 = {}, {}
    for q in range(len(diag)):
        if sys.zero_rows[q]:
            margins[q] = l[q] - diag[q] - off[q]
            cond1[q] = bool(margins[q] >= 0)
        else:
            margins[q] = lam2 + l[q] - diag[q] - off[q]
            cond2[q] = bool(margins[q] >= 0)
    return GershgorinReport(cond1, cond2, margins, lam2)


def tau_threshold(sys, all_rows=False):
    """Fiedler threshold ``max_s sum_{t != s} |T_st| + T_ss - l_s``.

    The max runs over the rows paired with positive Laplacian eigenvalues,
    or over every row with ``all_rows=True``.  ``-inf`` when there are no
    such rows (a single patch).
    """
    T = sys.transformed_jacobian
    vals = _offdiag_abs_sums(T) + np.diag(T) - sys.losses
    rows = np.ones(len(vals), dtype=bool) if all_rows else ~sys.zero_rows
    if not rows.any():
        return -np.inf
    return float(np.max(vals[rows]))


def trace_lower_bound(sys):
    """``(1 / (n (m - 1))) * tr(P^T Df P - E)``.

    A smallest species Fiedler value at or above this keeps the trace of the
    coefficient matrix non-positive.
    """
    if sys.m < 2:
        raise SinglePatch("trace bound needs at least two patches")
    return float(np.trace(sys.transformed_jacobian - sys.loss_matrix) / (sys.n * (sys.m - 1)))
