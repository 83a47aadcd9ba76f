"""Lazy transition matrices and their l2(pi) geometry.

Everything here treats a chain as a dense row-stochastic matrix P together
with a stationary distribution pi; reversibility (detailed balance) is the
standing assumption and is checked where it matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, GraphError
from .graphs import StaticGraph, _member_mask

STRUCTURAL_TOL = 1e-12
SPECTRAL_TOL = 1e-9
EXACT_CONDUCTANCE_LIMIT = 20
_MASK_CHUNK = 1 << 16


@dataclass
class LazyChainStep:
    """One schedule step: the lazy walk matrix of a static graph."""

    matrix: np.ndarray
    source_graph: StaticGraph
    m: int


@dataclass
class StationaryDistribution:
    pi: np.ndarray
    pi_star: float


def lazy_matrix(g: StaticGraph) -> LazyChainStep:
    """Lazy walk matrix: P(u,u) = 1/2, P(u,v) = 1/(2 d_u) on edges.

    Isolated vertices get an identity row (the walk cannot leave them).
    """
    n = g.n
    P = np.zeros((n, n))
    if g.m:
        d = g.degree.astype(float)
        P[g.edges[:, 0], g.edges[:, 1]] = 0.5 / d[g.edges[:, 0]]
        P[g.edges[:, 1], g.edges[:, 0]] = 0.5 / d[g.edges[:, 1]]
    diag = np.where(g.degree > 0, 0.5, 1.0)
    P[np.arange(n), np.arange(n)] = diag
    return LazyChainStep(matrix=P, source_graph=g, m=g.m)


def degree_stationary(g: StaticGraph) -> StationaryDistribution:
    """pi(u) = d_u / 2m, certified against the lazy matrix by detailed balance."""
    if g.m == 0:
        raise GraphError("degree stationary distribution needs at least one edge")
    pi = g.degree / (2.0 * g.m)
    step = lazy_matrix(g)
    if detailed_balance_residual(step.matrix, pi) > STRUCTURAL_TOL:
        raise GraphError("detailed balance certification failed")
    return StationaryDistribution(pi=pi, pi_star=float(pi[pi > 0].min()))


def _pi_array(pi) -> np.ndarray:
    if isinstance(pi, StationaryDistribution):
        return pi.pi
    return np.asarray(pi, dtype=float)


def _matrix_of(step) -> np.ndarray:
    if isinstance(step, LazyChainStep):
        return step.matrix
    return np.asarray(step, dtype=float)


def detailed_balance_residual(P, pi) -> float:
    P = _matrix_of(P)
    pi = _pi_array(pi)
    F = pi[:, None] * P
    return float(np.abs(F - F.T).max())


def inner_product_pi(f, g, pi) -> float:
    """<f, g>_pi = sum_u f(u) g(u) pi(u)."""
    pi = _pi_array(pi)
    return float(np.sum(np.asarray(f, float) * np.asarray(g, float) * pi))


def variance_pi(f, pi) -> float:
    """Var_pi f = E_pi f^2 - (E_pi f)^2; equals E_pi f^2 - 1 for likelihood ratios."""
    pi = _pi_array(pi)
    f = np.asarray(f, float)
    mean = float(np.sum(f * pi))
    return float(np.sum(f * f * pi) - mean * mean)


def likelihood_ratio(p, pi) -> np.ndarray:
    """rho = p / pi entrywise; infinite mass off the support of pi is rejected."""
    pi = _pi_array(pi)
    p = np.asarray(p, float)
    rho = np.zeros_like(p)
    on = pi > 0
    if np.any(p[~on] > STRUCTURAL_TOL):
        raise GraphError("distribution puts mass outside the support of pi")
    rho[on] = p[on] / pi[on]
    return rho


def dirichlet_form(step, f, pi=None) -> float:
    """E_P(f,f) = (1/2) sum_{u,v} (f(u)-f(v))^2 pi(u) P(u,v).

    For a LazyChainStep, pi defaults to the degree-stationary distribution of
    its source graph.
    """
    P = _matrix_of(step)
    if pi is None:
        if not isinstance(step, LazyChainStep):
            raise GraphError("pi is required when passing a raw matrix")
        pi = degree_stationary(step.source_graph).pi
    pi = _pi_array(pi)
    f = np.asarray(f, float)
    diff = f[:, None] - f[None, :]
    return float(0.5 * np.sum(diff * diff * (pi[:, None] * P)))


def dirichlet_form_edges(g: StaticGraph, f) -> float:
    """Lazy-graph specialization: (1/4m) sum over edges of (f(u)-f(v))^2."""
    if g.m == 0:
        return 0.0
    f = np.asarray(f, float)
    diff = f[g.edges[:, 0]] - f[g.edges[:, 1]]
    return float(np.sum(diff * diff) / (4.0 * g.m))


def spectral_gap(step, pi) -> float:
    """1 minus the second-largest eigenvalue of the pi-symmetrized matrix."""
    P = _matrix_of(step)
    pi = _pi_array(pi)
    if P.shape[0] < 2:
        raise GraphError("spectral gap needs at least two states")
    scale = max(float(np.abs(P).max()), 1.0)
    if detailed_balance_residual(P, pi) > 1e-10 * scale:
        raise GraphError("matrix is not reversible with respect to pi")
    root = np.sqrt(pi)
    S = (root[:, None] / root[None, :]) * P
    S = 0.5 * (S + S.T)
    w = np.linalg.eigvalsh(S)
    return float(1.0 - w[-2])


def chain_eigenvalues(step, pi) -> np.ndarray:
    """All eigenvalues of the reversible chain, ascending."""
    P = _matrix_of(step)
    pi = _pi_array(pi)
    root = np.sqrt(pi)
    S = (root[:, None] / root[None, :]) * P
    S = 0.5 * (S + S.T)
    return np.linalg.eigvalsh(S)


def second_eigenvector(step, pi) -> np.ndarray:
    """Right eigenvector of P for the second-largest eigenvalue."""
    P = _matrix_of(step)
    pi = _pi_array(pi)
    root = np.sqrt(pi)
    S = (root[:, None] / root[None, :]) * P
    S = 0.5 * (S + S.T)
    w, V = np.linalg.eigh(S)
    return V[:, -2] / root


def probability_flow(P, pi, a_mask: np.ndarray, b_mask: np.ndarray) -> float:
    """Q(A,B) = sum_{u in A, v in B} pi(u) P(u,v)."""
    P = _matrix_of(P)
    pi = _pi_array(pi)
    sub = P[np.ix_(a_mask, b_mask)]
    return float(np.sum(pi[a_mask][:, None] * sub))


def conductance_set(step, pi, members) -> float:
    """Phi_P(A) = Q(A, A^c) / min(pi(A), pi(A^c)) for a nonempty proper subset."""
    P = _matrix_of(step)
    pi = _pi_array(pi)
    mask = _member_mask(P.shape[0], members)
    k = int(mask.sum())
    if k == 0 or k == P.shape[0]:
        raise GraphError("conductance needs a nonempty proper subset")
    q = float(np.sum(pi[mask, None] * P[mask][:, ~mask]))
    bottom = min(float(pi[mask].sum()), float(pi[~mask].sum()))
    return q / bottom


def _crossing_pairs(P, pi):
    """Unordered pairs with positive flow and their symmetric weights pi(u)P(u,v)."""
    P = _matrix_of(P)
    pi = _pi_array(pi)
    F = pi[:, None] * P
    iu, iv = np.nonzero(np.triu(F + F.T, k=1) > 0)
    w = F[iu, iv]  # equals F[iv, iu] by reversibility
    return iu, iv, w


def conductance(step, pi) -> float:
    """Exact conductance: exhaustive minimum over all nonempty proper subsets.

    Limited to n <= 20 states; use conductance_sampled beyond that.
    """
    P = _matrix_of(step)
    pi = _pi_array(pi)
    n = P.shape[0]
    if n > EXACT_CONDUCTANCE_LIMIT:
        raise CapabilityError(
            f"exhaustive conductance limited to n <= {EXACT_CONDUCTANCE_LIMIT};"
            " conductance_sampled provides a flagged approximation"
        )
    iu, iv, w = _crossing_pairs(P, pi)
    best = np.inf
    for lo in range(1, 1 << (n - 1), _MASK_CHUNK):
        masks = np.arange(lo, min(lo + _MASK_CHUNK, 1 << (n - 1)), dtype=np.int64)
        cross = ((masks[:, None] >> iu) ^ (masks[:, None] >> iv)) & 1
        q = cross @ w
        bits = (masks[:, None] >> np.arange(n)) & 1
        pa = bits @ pi
        phi = q / np.minimum(pa, 1.0 - pa)
        best = min(best, float(phi.min()))
    return best


def conductance_sampled(step, pi, samples: int, seed) -> tuple[float, bool]:
    """Sampled upper estimate of the conductance; second item flags approximation."""
    P = _matrix_of(step)
    pi = _pi_array(pi)
    n = P.shape[0]
    rng = np.random.default_rng(seed)
    iu, iv, w = _crossing_pairs(P, pi)
    best = np.inf
    # all singletons, then random subsets
    for u in range(n):
        mask = np.zeros(n, bool)
        mask[u] = True
        q = float(w[(iu == u) | (iv == u)].sum())
        best = min(best, q / min(pi[u], 1.0 - pi[u]))
    for _ in range(samples):
        size = int(rng.integers(1, n // 2 + 1))
        members = rng.choice(n, size=size, replace=False)
        mask = np.zeros(n, bool)
        mask[members] = True
        inside = mask[iu] != mask[iv]
        q = float(w[inside].sum())
        pa = float(pi[mask].sum())
        best = min(best, q / min(pa, 1.0 - pa))
    return best, False


def conductance_profile(g: StaticGraph, k: int) -> float:
    """Phi_k = min over |S| = k of |E(S, V-S)| / (d |S|), regular graphs only."""
    if not g.is_regular():
        raise GraphError("the conductance profile is defined for regular graphs")
    n, d = g.n, int(g.degree[0])
    if n > EXACT_CONDUCTANCE_LIMIT:
        raise CapabilityError(f"exact profile limited to n <= {EXACT_CONDUCTANCE_LIMIT}")
    if not 1 <= k <= n // 2:
        raise GraphError("profile index must satisfy 1 <= k <= n/2")
    return float(cut_profile(g)[k] / (d * k))


def write_matrix_csv(matrix, path) -> None:
    """Debug export of a dense matrix (one row per line, full precision)."""
    np.savetxt(path, np.asarray(matrix, dtype=float), delimiter=",", fmt="%.17g")


def cut_profile(g: StaticGraph) -> np.ndarray:
    """minimum |E(S, V-S)| over |S| = k, for k = 0..n (inf at k=0 and k=n)."""
    n = g.n
    if n > EXACT_CONDUCTANCE_LIMIT:
        raise CapabilityError(f"exact profile limited to n <= {EXACT_CONDUCTANCE_LIMIT}")
    iu, iv = g.edges[:, 0], g.edges[:, 1]
    best = np.full(n + 1, np.inf)
    for lo in range(1, (1 << n) - 1, _MASK_CHUNK):
        masks = np.arange(lo, min(lo + _MASK_CHUNK, (1 << n) - 1), dtype=np.int64)
        cross = ((masks[:, None] >> iu) ^ (masks[:, None] >> iv)) & 1
        cuts = cross.sum(axis=1)
        sizes = ((masks[:, None] >> np.arange(n)) & 1).sum(axis=1)
        np.minimum.at(best, sizes, cuts)
    return best
