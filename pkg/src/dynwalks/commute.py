"""Commute times on static graphs and the cut-based bounds around them.

Everything is computed for the lazy chain and expressed through probability
flows Q(.), under which each edge of a prefix cut carries exactly 1/(4m).
The literal 2m-normalized forms from the non-lazy convention are reported
alongside for comparison; the flow forms are the provable bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import chain
from .errors import GraphError
from .graphs import StaticGraph, bfs_distances, edge_connectivity, is_connected

VOLTAGE_RESIDUAL_TOL = 1e-9


def _require_connected(g: StaticGraph):
    if not is_connected(g):
        raise GraphError("operation requires a connected graph")


def hitting_times_to(g: StaticGraph, target: int) -> np.ndarray:
    """Expected lazy-walk times to reach ``target`` from every vertex (linear solve)."""
    _require_connected(g)
    P = chain.lazy_matrix(g).matrix
    n = g.n
    A = np.eye(n) - P
    A[target, :] = 0.0
    A[target, target] = 1.0
    b = np.ones(n)
    b[target] = 0.0
    return np.linalg.solve(A, b)


def exact_commute(g: StaticGraph, s: int, t: int) -> float:
    """C_st = tau_{s,t} + tau_{t,s}; returns 0.0 for s == t by convention."""
    if s == t:
        return 0.0
    return float(hitting_times_to(g, t)[s] + hitting_times_to(g, s)[t])


def commute_matrix(g: StaticGraph) -> np.ndarray:
    """All pairwise commute times via n absorbing solves."""
    _require_connected(g)
    H = np.column_stack([hitting_times_to(g, v) for v in range(g.n)])
    return H + H.T


def max_commute(g: StaticGraph) -> float:
    return float(commute_matrix(g).max())


@dataclass
class VoltageFunction:
    values: np.ndarray
    s: int
    t: int


def solve_voltage(g: StaticGraph, s: int, t: int) -> VoltageFunction:
    """The harmonic maximiser of the variational commute-time characterisation:
    g(s) = 0, g(t) = 1, harmonic elsewhere, with 1/E_P(g,g) = C_st."""
    _require_connected(g)
    if s == t:
        raise GraphError("voltage needs distinct endpoints")
    P = chain.lazy_matrix(g).matrix
    n = g.n
    interior = np.array([v for v in range(n) if v not in (s, t)], dtype=np.int64)
    vals = np.zeros(n)
    vals[t] = 1.0
    if interior.size:
        A = np.eye(len(interior)) - P[np.ix_(interior, interior)]
        b = P[interior, t]
        vals[interior] = np.linalg.solve(A, b)
    resid = np.abs(vals - P @ vals)[interior].max() if interior.size else 0.0
    if resid > VOLTAGE_RESIDUAL_TOL:
        raise GraphError(f"voltage solve residual {resid:.3e} exceeds tolerance")
    if vals.min() < -1e-12 or vals.max() > 1.0 + 1e-12:
        raise GraphError("voltage escaped [0, 1]")
    return VoltageFunction(values=np.clip(vals, 0.0, 1.0), s=s, t=t)


def voltage_commute_bound(g: StaticGraph, volt: VoltageFunction) -> float:
    """1 / E_P(g,g) for the lazy chain; equals the exact commute time."""
    return 1.0 / chain.dirichlet_form_edges(g, volt.values)


@dataclass
class Labelling:
    order: np.ndarray             # order[j] = vertex with rank j
    prefix_boundaries: np.ndarray  # |boundary([j])| for j = 1..n-1
    prefix_flows: np.ndarray       # Q([j], V - [j]) for j = 1..n-1


def _prefix_cuts(g: StaticGraph, order: np.ndarray) -> np.ndarray:
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    a = np.minimum(pos[g.edges[:, 0]], pos[g.edges[:, 1]])
    b = np.maximum(pos[g.edges[:, 0]], pos[g.edges[:, 1]])
    # edge crosses prefix j (1-indexed size) iff a < j <= b
    delta = np.zeros(g.n + 1, dtype=np.int64)
    np.add.at(delta, a + 1, 1)
    np.add.at(delta, b + 1, -1)
    return np.cumsum(delta)[1:g.n]


def voltage_labelling(g: StaticGraph, volt: VoltageFunction) -> Labelling:
    """Vertices by non-decreasing voltage, ties by index, s first and t last."""
    key = volt.values.copy()
    key[volt.s] = -np.inf
    key[volt.t] = np.inf
    order = np.lexsort((np.arange(g.n), key))
    cuts = _prefix_cuts(g, order)
    flows = cuts / (4.0 * g.m)
    return Labelling(order=order, prefix_boundaries=cuts, prefix_flows=flows)


@dataclass
class CutSumBounds:
    flow: float            # sum_j 1/Q([j]) = 4m sum_j 1/|d[j]| (provable, lazy)
    literal_2m: float      # simple-walk (2m) normalization, for comparison
    reversed_flow: float   # half-sum variant, flow-normalized
    reversed_literal: float


def cut_sum_upper(g: StaticGraph, s: int, t: int) -> tuple[Labelling, CutSumBounds]:
    """Voltage-ordered prefix-cut upper bounds on the lazy commute time."""
    _require_connected(g)
    volt = solve_voltage(g, s, t)
    lab = voltage_labelling(g, volt)
    inv = 1.0 / lab.prefix_boundaries
    flow = float(np.sum(1.0 / lab.prefix_flows))
    literal = float(2.0 * g.m * inv.sum())
    h = (g.n - 1 + 1) // 2  # ceil((n-1)/2): the larger half covers the total
    fwd_half = float(inv[:h].sum())
    rev_half = float(inv[::-1][:h].sum())
    reversed_literal = 4.0 * g.m * max(fwd_half, rev_half)
    reversed_flow = 2.0 * reversed_literal
    return lab, CutSumBounds(flow=flow, literal_2m=literal,
                             reversed_flow=reversed_flow,
                             reversed_literal=reversed_literal)


@dataclass
class ConnectedLabelling:
    order: np.ndarray | None
    status: str          # "found-greedy" | "found-search" | "not-found"
    greedy_ok: bool


def connected_labelling(g: StaticGraph, volt: VoltageFunction,
                        tol: float = 1e-9) -> ConnectedLabelling:
    """A voltage-monotone ordering whose every prefix induces a connected
    subgraph: greedy over the frontier first, exhaustive search as fallback.

    The ordering starts at s; its last vertex carries voltage 1 but need not
    be t itself (a pendant neighbor of t ties at voltage 1 and can only come
    after t).  A not-found result at small n is flagged, never fabricated."""
    n, s = g.n, volt.s
    gv = volt.values
    order = [s]
    used = np.zeros(n, dtype=bool)
    used[s] = True
    greedy_ok = True
    while len(order) < n:
        frontier = sorted(
            {int(w) for u in order for w in g.neighbors(u) if not used[w]},
            key=lambda w: (gv[w], w))
        if not frontier:
            greedy_ok = False
            break
        pick = frontier[0]
        if gv[pick] < gv[order[-1]] - tol:
            greedy_ok = False
            break
        order.append(pick)
        used[pick] = True
    if greedy_ok and len(order) == n:
        return ConnectedLabelling(order=np.array(order), status="found-greedy", greedy_ok=True)

    if n > 12:
        return ConnectedLabelling(order=None, status="not-found", greedy_ok=False)
    found = _search_labelling(g, gv, s, tol)
    if found is not None:
        return ConnectedLabelling(order=np.array(found), status="found-search", greedy_ok=False)
    return ConnectedLabelling(order=None, status="not-found", greedy_ok=False)


def _search_labelling(g: StaticGraph, gv, s, tol):
    n = g.n
    used = np.zeros(n, dtype=bool)
    used[s] = True
    order = [s]

    def rec() -> bool:
        if len(order) == n:
            return True
        last = gv[order[-1]]
        cands = sorted(
            {int(w) for u in order for w in g.neighbors(u) if not used[w]},
            key=lambda w: (gv[w], w))
        for w in cands:
            if gv[w] < last - tol:
                continue
            used[w] = True
            order.append(w)
            if rec():
                return True
            order.pop()
            used[w] = False
        return False

    return list(order) if rec() else None


def prefixes_connected(g: StaticGraph, order) -> bool:
    """Direct check that every prefix of the ordering induces a connected subgraph."""
    seen = np.zeros(g.n, dtype=bool)
    seen[order[0]] = True
    for v in order[1:]:
        if not any(seen[w] for w in g.neighbors(v)):
            return False
        seen[v] = True
    return True


@dataclass
class NashWilliamsBound:
    flow: float        # sum_j 1/Q(E_j): the lazy-chain lower bound
    literal_2m: float  # simple-walk (2m) normalization


def distance_layer_cutsets(g: StaticGraph, s: int, t: int) -> list[list[tuple[int, int]]]:
    """Canonical edge-disjoint cutsets: edges from {dist < j} to {dist >= j}
    for j = 1..dist(s,t), distances measured from s."""
    dist = bfs_distances(g, s)
    dt = int(dist[t])
    cutsets: list[list[tuple[int, int]]] = [[] for _ in range(dt)]
    for u, v in g.edges:
        a, b = sorted((int(dist[u]), int(dist[v])))
        if b == a + 1 and b <= dt:
            cutsets[b - 1].append((int(u), int(v)))
    return cutsets


def nash_williams_lower(g: StaticGraph, s: int, t: int, cutsets) -> NashWilliamsBound:
    """Lower bound on the lazy commute time from edge-disjoint separating cutsets."""
    _require_connected(g)
    seen: set[tuple[int, int]] = set()
    for j, cs in enumerate(cutsets):
        norm = {tuple(sorted(map(int, e))) for e in cs}
        if len(norm) != len(cs):
            raise GraphError(f"cutset {j} contains duplicate edges")
        if norm & seen:
            raise GraphError(f"cutset {j} shares edges with an earlier cutset")
        if not _separates(g, s, t, norm):
            raise GraphError(f"cutset {j} does not separate s from t")
        seen |= norm
    sizes = np.array([len(cs) for cs in cutsets], dtype=float)
    flow = float(np.sum(4.0 * g.m / sizes))
    literal = float(np.sum(2.0 * g.m / sizes))
    return NashWilliamsBound(flow=flow, literal_2m=literal)


def _separates(g: StaticGraph, s: int, t: int, removed: set) -> bool:
    keep = [e for e in map(tuple, g.edges.tolist()) if tuple(sorted(e)) not in removed]
    sub = StaticGraph(g.n, keep if keep else np.empty((0, 2), np.int64))
    return not np.isfinite(bfs_distances(sub, s)[t])


def profile_bound(g: StaticGraph) -> float:
    """4n sum_{j<=n/2} 1/(Phi_j j) where Phi_j = min_{|S|=j} |E(S,S^c)|/(d j).

    Simplifies to 4 n d sum 1/cutmin_j; regular graphs, exact profile only.
    """
    if not g.is_regular():
        raise GraphError("profile bound needs a regular graph")
    d = int(g.degree[0])
    cutmin = chain.cut_profile(g)
    js = np.arange(1, g.n // 2 + 1)
    return float(4.0 * g.n * d * np.sum(1.0 / cutmin[js]))


def eigen_sum(g: StaticGraph) -> float:
    """sum_{k>=2} 1/(1 - lambda_k) over the lazy chain's eigenvalues."""
    _require_connected(g)
    pi = chain.degree_stationary(g).pi
    w = chain.chain_eigenvalues(chain.lazy_matrix(g).matrix, pi)
    return float(np.sum(1.0 / (1.0 - w[:-1])))


def connectivity_bound(g: StaticGraph) -> float:
    """n^2 dbar (log2(delta)/delta^2 + 1/(delta rho)) with explicit constant 1."""
    _require_connected(g)
    delta = int(g.degree.min())
    rho = edge_connectivity(g)
    dbar = 2.0 * g.m / g.n
    return float(g.n ** 2 * dbar * (np.log2(delta) / delta ** 2 + 1.0 / (delta * rho)))
