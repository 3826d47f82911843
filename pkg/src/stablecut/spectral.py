"""Symmetric eigensolver (cyclic Jacobi), Fiedler pairs, and a bisection oracle.

The Jacobi sweep uses the round-robin (tournament) ordering so that each
step rotates ``n // 2`` disjoint index pairs at once; every pair is still
visited exactly once per sweep.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import Disconnected, NoConvergence, NotSymmetric, TooLarge, TooSmall
from .graph import is_connected, laplacian

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]
    sweeps: int = 0


@dataclass(frozen=True, eq=False)
class FiedlerPair:
    value: float
    vector: np.ndarray
    degenerate_fiedler: bool = False


@lru_cache(maxsize=None)
def _round_robin(n):
    """Disjoint (p, q) pair sets covering all n(n-1)/2 pairs, one set per step."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _check_symmetric(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
        raise NotSymmetric("matrix is not symmetric")
    return 0.5 * (M + M.T)


def _off_norm(A):
    # direct sum; ||A||^2 - sum(diag^2) cancels catastrophically near convergence
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def eig_symmetric(M, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Stops once the off-diagonal Frobenius norm drops to ``tol * ||M||_F``.
    Eigenvalues come back ascending; ties keep the original column order.
    """
    A = _check_symmetric(M).copy()
    n = A.shape[0]
    V = np.eye(n)
    target = tol * np.linalg.norm(A)
    sweeps = 0
    rounds = _round_robin(n) if n > 1 else ()
    while _off_norm(A) > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p, q in rounds:
            apq = A[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore"):
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            safe = np.where(big, 1.0, theta)
            t = np.where(
                big,
                0.5 / np.where(big, theta, 1.0),
                np.where(safe >= 0, 1.0, -1.0) / (np.abs(safe) + np.sqrt(safe * safe + 1.0)),
            )
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            R = np.eye(n)
            R[p, p] = c
            R[q, q] = c
            R[p, q] = s
            R[q, p] = -s
            A = R.T @ A @ R
            A[p, q] = 0.0
            A[q, p] = 0.0
            V = V @ R
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], V[:, order], sweeps)


def eigvals_symmetric(M):
    return eig_symmetric(M).eigenvalues


def normalize_sign(v, tiny=1e-12):
    """Flip ``v`` so its first entry with magnitude above ``tiny`` is positive."""
    v = np.asarray(v, dtype=float)
    for x in v:
        if abs(x) > tiny:
            return -v if x < 0 else v.copy()
    return v.copy()


def fiedler_of_matrix(L, degeneracy_tol=1e-9):
    dec = eig_symmetric(L)
    lam = dec.eigenvalues
    vec = dec.eigenvectors[:, 1]
    vec = normalize_sign(vec / np.linalg.norm(vec))
    degenerate = len(lam) > 2 and (lam[2] - lam[1]) <= degeneracy_tol * (1.0 + abs(lam[-1]))
    return FiedlerPair(float(lam[1]), vec, bool(degenerate))


def fiedler(g):
    """Fiedler value and sign-normalized unit Fiedler vector of a connected graph."""
    if len(g) < 2:
        raise TooSmall("Fiedler pair needs at least two nodes")
    if not is_connected(g):
        raise Disconnected("graph is disconnected; its Fiedler value is 0")
    return fiedler_of_matrix(laplacian(g))


def algebraic_connectivity(g):
    """Second-smallest Laplacian eigenvalue; 0 for disconnected graphs, no checks."""
    if len(g) < 2:
        raise TooSmall("algebraic connectivity needs at least two nodes")
    return float(eig_symmetric(laplacian(g)).eigenvalues[1])


# ---------------------------------------------------------------------------
# Independent oracle: bisection on sign changes of the leading principal minors
# of M - lambda*I.  Used only to check eig_symmetric in tests.


def _count_below(M, lam, scale):
    """Number of eigenvalues of ``M`` below ``lam``.

    Eliminates ``M - lam*I`` without pivoting; the pivots are ratios of
    consecutive leading principal minors, so negative pivots count the sign
    changes in the minor sequence (Sylvester's inertia).
    """
    n = len(M)
    A = [[M[i][j] - (lam if i == j else 0.0) for j in range(n)] for i in range(n)]
    tiny = 1e-300 + 1e-15 * scale
    negatives = 0
    for k in range(n):
        piv = A[k][k]
        if piv == 0.0:
            piv = tiny
        if piv < 0:
            negatives += 1
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                row_k, row_i = A[k], A[i]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return negatives


def oracle_eigenvalues(M, max_n=6):
    """Eigenvalues (ascending) of a small symmetric matrix by bisection.

    Brackets come from Gershgorin discs widened by one; an independent path
    from :func:`eig_symmetric`.
    """
    M = _check_symmetric(M)
    n = M.shape[0]
    if n > max_n:
        raise TooLarge(f"oracle limited to n <= {max_n}, got {n}")
    if n == 0:
        return np.zeros(0)
    rows = M.tolist()
    radius = np.sum(np.abs(M), axis=1) - np.abs(np.diag(M))
    lo0 = float(np.min(np.diag(M) - radius)) - 1.0
    hi0 = float(np.max(np.diag(M) + radius)) + 1.0
    scale = max(1.0, abs(lo0), abs(hi0))
    out = []
    for k in range(n):
        lo, hi = lo0, hi0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi or hi - lo <= 4e-16 * scale:
                break
            if _count_below(rows, mid, scale) > k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)
