"""Static undirected graphs: structure queries and the generator families.

Vertices are dense integers 0..n-1. Graphs are immutable after construction
and safe to share across workers.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra, maximum_flow

from .errors import CapabilityError, GenerationError, GraphError

DEFAULT_EXPANDER_GAP = 0.05
# Alon-Boppana caps the lazy gap of 3-regular graphs at (1 - 2*sqrt(2)/3)/2
# ~ 0.0286 + o(1), so the 0.05 acceptance default only applies at small n.
LARGE_N_EXPANDER_GAP = 0.02
EXPANDER_GAP_CUTOFF_N = 32
REGULAR_RETRY_CAP = 1000


def expander_gap_threshold(n: int) -> float:
    return DEFAULT_EXPANDER_GAP if n <= EXPANDER_GAP_CUTOFF_N else LARGE_N_EXPANDER_GAP


def as_rng(seed) -> np.random.Generator:
    """Coerce an int seed, SeedSequence, or Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derived_rng(seed, *key) -> np.random.Generator:
    """Deterministic per-(seed, key) generator, used for per-step randomness."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


class StaticGraph:
    """Undirected, unweighted simple graph on {0..n-1}.

    Parameters
    ----------
    n : int
        Vertex count.
    edges : array-like, shape (m, 2)
        Unordered vertex pairs; normalized to u < v, sorted, deduplicated.
    """

    def __init__(self, n: int, edges):
        n = int(n)
        if n <= 0:
            raise GraphError("vertex count must be positive")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise GraphError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise GraphError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            e = np.unique(e, axis=0)
        self.n = n
        self.edges = e
        self.m = int(e.shape[0])
        deg = np.zeros(n, dtype=np.int64)
        if self.m:
            np.add.at(deg, e[:, 0], 1)
            np.add.at(deg, e[:, 1], 1)
        self.degree = deg
        # CSR adjacency, shared by BFS/connectivity/sampling paths.
        ends = np.concatenate([e[:, 0], e[:, 1]]) if self.m else np.empty(0, np.int64)
        other = np.concatenate([e[:, 1], e[:, 0]]) if self.m else np.empty(0, np.int64)
        order = np.argsort(ends, kind="stable")
        self.adj_indices = other[order]
        self.adj_indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=self.adj_indptr[1:])

    def neighbors(self, u: int) -> np.ndarray:
        return self.adj_indices[self.adj_indptr[u]:self.adj_indptr[u + 1]]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def csr(self) -> csr_matrix:
        data = np.ones(len(self.adj_indices), dtype=np.int32)
        return csr_matrix((data, self.adj_indices, self.adj_indptr), shape=(self.n, self.n))

    def min_degree(self) -> int:
        return int(self.degree.min())

    def is_regular(self) -> bool:
        return bool(self.degree.size) and int(self.degree.min()) == int(self.degree.max())

    def __eq__(self, other):
        return (
            isinstance(other, StaticGraph)
            and self.n == other.n
            and np.array_equal(self.edges, other.edges)
        )

    def __repr__(self):
        return f"StaticGraph(n={self.n}, m={self.m})"


def is_connected(g: StaticGraph) -> bool:
    if g.n == 1:
        return True
    if g.m == 0:
        return False
    ncomp = connected_components(g.csr(), directed=False, return_labels=False)
    return int(ncomp) == 1


def bfs_distances(g: StaticGraph, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices get inf."""
    if not 0 <= source < g.n:
        raise GraphError("source out of range")
    return dijkstra(g.csr(), directed=False, indices=source, unweighted=True)


def edge_boundary(g: StaticGraph, members) -> list[tuple[int, int]]:
    """Edges with exactly one endpoint in ``members``.

    ``members`` must be a nonempty proper subset of the vertex set.
    """
    mask = _member_mask(g.n, members)
    k = int(mask.sum())
    if k == 0 or k == g.n:
        raise GraphError("edge boundary needs a nonempty proper subset")
    if g.m == 0:
        return []
    cross = mask[g.edges[:, 0]] != mask[g.edges[:, 1]]
    return [(int(u), int(v)) for u, v in g.edges[cross]]


def ball_size(g: StaticGraph, center: int, radius: int) -> int:
    """Number of vertices within hop distance ``radius`` of ``center``."""
    if not 0 <= center < g.n:
        raise GraphError("center out of range")
    if radius < 0:
        raise GraphError("radius must be >= 0")
    dist = bfs_distances(g, center)
    return int(np.sum(dist <= radius))


def edge_connectivity(g: StaticGraph) -> int:
    """Global minimum edge cut, exact.

    Computed as the minimum of n-1 unit-capacity max-flows from vertex 0 to
    every other vertex (each undirected edge is a pair of unit arcs).
    Returns 0 for disconnected graphs.
    """
    if g.n == 1:
        return 0
    if not is_connected(g):
        return 0
    cap = csr_matrix(
        (np.ones(len(g.adj_indices), dtype=np.int32), g.adj_indices, g.adj_indptr),
        shape=(g.n, g.n),
    )
    best = int(g.degree.min())
    for v in range(1, g.n):
        flow = maximum_flow(cap, 0, v).flow_value
        if flow < best:
            best = int(flow)
            if best == 1:
                break
    return best


def min_cut_brute_force(g: StaticGraph) -> int:
    """Independent oracle for edge_connectivity: enumerate all proper subsets."""
    if g.n > 16:
        raise CapabilityError("brute-force min cut limited to n <= 16")
    if not is_connected(g):
        return 0
    u, v = g.edges[:, 0], g.edges[:, 1]
    best = g.m
    for mask in range(1, 1 << (g.n - 1)):  # vertex n-1 stays outside
        inside = (mask >> u) & 1 != (mask >> v) & 1
        best = min(best, int(inside.sum()))
    return best


def _member_mask(n: int, members) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    idx = np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64)
    if idx.size:
        if idx.min() < 0 or idx.max() >= n:
            raise GraphError("vertex subset member out of range")
        mask[idx] = True
    return mask


# ---------------------------------------------------------------------------
# generator families
# ---------------------------------------------------------------------------

def cycle_graph(n: int) -> StaticGraph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    i = np.arange(n)
    return StaticGraph(n, np.column_stack([i, (i + 1) % n]))


def path_graph(n: int) -> StaticGraph:
    if n < 2:
        raise GraphError("path needs n >= 2")
    i = np.arange(n - 1)
    return StaticGraph(n, np.column_stack([i, i + 1]))


def complete_graph(n: int) -> StaticGraph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    u, v = np.triu_indices(n, k=1)
    return StaticGraph(n, np.column_stack([u, v]))


def torus_graph(dims) -> StaticGraph:
    """d-dimensional torus; every side must be >= 3 so the graph is simple."""
    dims = [int(d) for d in dims]
    if not dims or any(d < 3 for d in dims):
        raise GraphError("torus needs every side >= 3")
    n = int(np.prod(dims))
    coords = np.indices(dims).reshape(len(dims), n)
    edges = []
    for axis, side in enumerate(dims):
        shifted = coords.copy()
        shifted[axis] = (shifted[axis] + 1) % side
        u = np.ravel_multi_index(coords, dims)
        v = np.ravel_multi_index(shifted, dims)
        edges.append(np.column_stack([u, v]))
    return StaticGraph(n, np.concatenate(edges))


def barbell_graph(n: int) -> StaticGraph:
    """Two cliques of size n/3 joined by a path on the middle n/3 vertices."""
    if n % 3 != 0 or n < 6:
        raise GraphError("barbell needs n divisible by 3, n >= 6")
    k = n // 3
    left = np.arange(k)
    mid = np.arange(k, 2 * k)
    right = np.arange(2 * k, n)
    e = []
    for block in (left, right):
        u, v = np.triu_indices(k, k=1)
        e.append(np.column_stack([block[u], block[v]]))
    chain = np.concatenate([[left[-1]], mid, [right[0]]])
    e.append(np.column_stack([chain[:-1], chain[1:]]))
    return StaticGraph(n, np.concatenate(e))


def circulant_graph(n: int, rho: int) -> StaticGraph:
    """Edges (i, i+u mod n) for 1 <= u <= rho; 2*rho-regular."""
    if rho < 1 or 2 * rho >= n:
        raise GraphError("circulant needs 1 <= rho < n/2")
    i = np.arange(n)
    e = [np.column_stack([i, (i + u) % n]) for u in range(1, rho + 1)]
    return StaticGraph(n, np.concatenate(e))


def complete_prism_graph(n: int) -> StaticGraph:
    """Two complete graphs on n/2 vertices joined by a perfect matching."""
    if n % 2 != 0 or n < 4:
        raise GraphError("complete prism needs even n >= 4")
    h = n // 2
    u, v = np.triu_indices(h, k=1)
    e = [
        np.column_stack([u, v]),
        np.column_stack([u + h, v + h]),
        np.column_stack([np.arange(h), np.arange(h) + h]),
    ]
    return StaticGraph(n, np.concatenate(e))


def random_regular_graph(n: int, d: int, seed) -> StaticGraph:
    """Pairing-model d-regular graph, rejecting self-loops and multi-edges."""
    if d < 1 or d >= n:
        raise GraphError("need 1 <= d < n")
    if (n * d) % 2 != 0:
        raise GraphError("n*d must be even")
    rng = as_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(REGULAR_RETRY_CAP):
        perm = rng.permutation(stubs)
        pairs = np.sort(perm.reshape(-1, 2), axis=1)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        if np.unique(pairs, axis=0).shape[0] != pairs.shape[0]:
            continue
        return StaticGraph(n, pairs)
    raise GenerationError(f"pairing model failed after {REGULAR_RETRY_CAP} attempts")


def gnp_connected_graph(n: int, p: float, seed) -> StaticGraph:
    """Erdos-Renyi graph resampled until connected."""
    if n < 2 or not 0 < p <= 1:
        raise GraphError("need n >= 2 and 0 < p <= 1")
    rng = as_rng(seed)
    u, v = np.triu_indices(n, k=1)
    for _ in range(REGULAR_RETRY_CAP):
        keep = rng.random(len(u)) < p
        g = StaticGraph(n, np.column_stack([u[keep], v[keep]]))
        if is_connected(g):
            return g
    raise GenerationError("could not draw a connected G(n,p) sample")


def expander_graph(
    n: int,
    seed,
    degree: int = 3,
    gap_min: float | None = None,
    forbidden_edges=None,
    max_tries: int = 400,
) -> StaticGraph:
    """Random regular graph accepted only if connected with lazy spectral gap >= gap_min.

    ``gap_min`` defaults to the size-aware threshold (0.05 up to n=32, 0.02
    beyond, where Alon-Boppana rules out 0.05 for cubic graphs).
    ``forbidden_edges`` rejects samples containing any of the given pairs, so a
    caller can union the expander with other edges without degree collisions.
    """
    if gap_min is None:
        gap_min = expander_gap_threshold(n)
    if forbidden_edges is None:
        forbidden_edges = []
    forbid = {tuple(sorted(map(int, e))) for e in forbidden_edges}
    for t in range(max_tries):
        g = random_regular_graph(n, degree, derived_rng(_entropy_of(seed), t))
        if forbid and any((int(a), int(b)) in forbid for a, b in g.edges):
            continue
        if not is_connected(g):
            continue
        if _lazy_gap_regular(g) >= gap_min:
            return g
    raise GenerationError(f"no expander with gap >= {gap_min} in {max_tries} tries")


def _entropy_of(seed) -> int:
    if isinstance(seed, np.random.Generator):
        # draw a stable sub-entropy once; callers normally pass ints
        return int(seed.integers(0, 2**63 - 1))
    return int(seed)


def _lazy_gap_regular(g: StaticGraph) -> float:
    # uniform pi makes the lazy matrix symmetric; large n uses sparse Lanczos
    d = g.degree.astype(float)
    if g.n <= 400:
        P = np.zeros((g.n, g.n))
        P[g.edges[:, 0], g.edges[:, 1]] = 0.5 / d[g.edges[:, 0]]
        P[g.edges[:, 1], g.edges[:, 0]] = 0.5 / d[g.edges[:, 1]]
        np.fill_diagonal(P, 0.5)
        w = np.linalg.eigvalsh(P)
        return float(1.0 - w[-2])
    from scipy.sparse import coo_matrix
    from scipy.sparse.linalg import eigsh

    rows = np.concatenate([g.edges[:, 0], g.edges[:, 1], np.arange(g.n)])
    cols = np.concatenate([g.edges[:, 1], g.edges[:, 0], np.arange(g.n)])
    vals = np.concatenate([
        0.5 / d[g.edges[:, 0]],
        0.5 / d[g.edges[:, 1]],
        np.full(g.n, 0.5),
    ])
    P = coo_matrix((vals, (rows, cols)), shape=(g.n, g.n)).tocsr()
    w = eigsh(P, k=2, which="LA", return_eigenvectors=False)
    return float(1.0 - np.sort(w)[0])


FAMILIES = {
    "cycle": lambda params, seed: cycle_graph(params["n"]),
    "path": lambda params, seed: path_graph(params["n"]),
    "complete": lambda params, seed: complete_graph(params["n"]),
    "torus": lambda params, seed: torus_graph(params["dims"]),
    "barbell": lambda params, seed: barbell_graph(params["n"]),
    "circulant": lambda params, seed: circulant_graph(params["n"], params["rho"]),
    "complete_prism": lambda params, seed: complete_prism_graph(params["n"]),
    "random_regular": lambda params, seed: random_regular_graph(params["n"], params["d"], seed),
    "gnp_connected": lambda params, seed: gnp_connected_graph(params["n"], params["p"], seed),
    "expander3": lambda params, seed: expander_graph(
        params["n"], seed, gap_min=params.get("gap_min", DEFAULT_EXPANDER_GAP)
    ),
}


def generate(family: str, seed=None, **params) -> StaticGraph:
    """Build a graph of a named family; randomized families are seed-deterministic."""
    if family not in FAMILIES:
        raise GraphError(f"unknown graph family {family!r}")
    return FAMILIES[family](params, seed)


# ---------------------------------------------------------------------------
# text format: first line "n m", then one "u v" line per edge
# ---------------------------------------------------------------------------

def write_graph_text(g: StaticGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_graph_text(path) -> StaticGraph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise GraphError("graph text file must start with 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            u, v = line.split()
            edges.append((int(u), int(v)))
    if len(edges) != m:
        raise GraphError(f"expected {m} edges, found {len(edges)}")
    return StaticGraph(n, edges)
