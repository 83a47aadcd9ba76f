"""Exact and Monte Carlo random-walk computations on graph schedules.

Exact mode propagates distributions through the step matrices
(p^(t+1) = p^(t) P^(t+1)); hitting times use absorbing propagation and are
reported as certified lower bounds plus residual mass, never extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import chain
from .errors import GraphError, TruncationError
from .schedule import GraphSchedule

NEGATIVE_DUST = 1e-14
DECAY_TOL = 1e-10


@dataclass
class DistributionState:
    p: np.ndarray
    t: int
    rho: np.ndarray | None = None


@dataclass
class HittingEstimate:
    lower: float          # sum_{t<=T} Pr[tau > t], a certified lower bound
    residual_mass: float  # surviving probability at the truncation point
    T: int
    status: str           # "exact-to-tolerance" | "truncated"


@dataclass
class MonteCarloSummary:
    times: np.ndarray
    censored: np.ndarray
    mean: float
    stderr: float
    trials: int
    n_censored: int
    seed: int


def _point_or_dist(n: int, p0) -> np.ndarray:
    if np.isscalar(p0):
        v = int(p0)
        if not 0 <= v < n:
            raise GraphError("start vertex out of range")
        p = np.zeros(n)
        p[v] = 1.0
        return p
    p = np.asarray(p0, dtype=float).copy()
    if p.shape != (n,) or p.min() < 0 or abs(p.sum() - 1.0) > 1e-10:
        raise GraphError("start must be a vertex or a probability distribution")
    return p


def _clamp(p: np.ndarray) -> np.ndarray:
    low = p.min()
    if low < -NEGATIVE_DUST:
        raise GraphError(f"propagation produced negative mass {low:.3e}")
    if low < 0:
        p = np.clip(p, 0.0, None)
        p /= p.sum()
    return p


def evolve(s: GraphSchedule, p0, t: int, pi=None) -> DistributionState:
    """Exact distribution after t steps; exposes rho against pi when given."""
    if t < 0:
        raise GraphError("t must be >= 0")
    p = _point_or_dist(s.n, p0)
    for step in range(1, t + 1):
        p = _clamp(p @ s.step_matrix(step))
    rho = None if pi is None else chain.likelihood_ratio(p, chain._pi_array(pi))
    return DistributionState(p=p, t=t, rho=rho)


def evolve_trace(s: GraphSchedule, p0, steps: int) -> list[np.ndarray]:
    """All intermediate distributions p^(0) .. p^(steps)."""
    p = _point_or_dist(s.n, p0)
    out = [p.copy()]
    for step in range(1, steps + 1):
        p = _clamp(p @ s.step_matrix(step))
        out.append(p.copy())
    return out


def measure_mixing(s: GraphSchedule, pi, threshold: float = 1.0 / 3.0,
                   horizon: int | None = None) -> int:
    """Smallest t with ||rho^[0,t]_{u,.} - 1||_{2,pi} <= threshold from every start.

    Propagates all n point starts as one n x n product.  Raises
    TruncationError carrying (horizon, worst norm) when the cap is reached.
    """
    pi = chain._pi_array(pi)
    n = s.n
    if horizon is None:
        horizon = 100 * n * n
    M = np.eye(n)
    target = threshold * threshold
    worst = np.inf
    for t in range(1, horizon + 1):
        M = M @ s.step_matrix(t)
        var = (M * M / pi[None, :]).sum(axis=1) - 1.0
        worst = float(var.max())
        if worst <= target:
            return t
    raise TruncationError(
        f"mixing not reached by t={horizon}; worst squared norm {worst:.3e}",
        t=horizon, value=worst)


def mixing_time_definition_scan(s: GraphSchedule, pi, threshold: float = 1.0 / 3.0,
                                horizon: int = 10_000) -> int:
    """Independent definition-level oracle: per-start propagation, no shared product."""
    pi = chain._pi_array(pi)
    for t in range(1, horizon + 1):
        ok = True
        for u in range(s.n):
            p = evolve(s, u, t).p
            rho = p / pi
            if chain.variance_pi(rho, pi) > threshold * threshold:
                ok = False
                break
        if ok:
            return t
    raise TruncationError("definition scan exhausted", t=horizon, value=np.nan)


def _target_mask(n: int, target) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    if np.isscalar(target):
        mask[int(target)] = True
    else:
        mask[np.asarray(list(target), dtype=np.int64)] = True
    if not mask.any():
        raise GraphError("empty target")
    return mask


def exact_hitting(s: GraphSchedule, source, target, t_max: int | None = None,
                  eps: float = 1e-9) -> HittingEstimate:
    """Expected time to reach the target (vertex or vertex set) from source.

    Absorbing propagation: lower = sum of survival probabilities, residual is
    the mass still unabsorbed at the stopping point.
    """
    return exact_hitting_batch(s, [(source, target)], t_max=t_max, eps=eps)[0]


def exact_hitting_batch(s: GraphSchedule, queries, t_max: int | None = None,
                        eps: float = 1e-9) -> list[HittingEstimate]:
    """Shared-pass absorbing propagation for several queries on one schedule."""
    n = s.n
    if t_max is None:
        t_max = 200 * n * n
    k = len(queries)
    X = np.zeros((n, k))
    masks = []
    for j, (source, target) in enumerate(queries):
        mask = _target_mask(n, target)
        p = _point_or_dist(n, source)
        if p[mask].sum() > 0:
            raise GraphError("source starts inside the target")
        X[:, j] = p
        masks.append(mask)
    lower = np.ones(k)  # Pr[tau > 0] = 1
    survival = np.ones(k)
    t = 0
    while t < t_max and survival.max() > eps:
        t += 1
        X = s.step_matrix(t).T @ X
        for j, mask in enumerate(masks):
            X[mask, j] = 0.0
        survival = X.sum(axis=0)
        lower += survival
    out = []
    for j in range(k):
        status = "exact-to-tolerance" if survival[j] <= eps else "truncated"
        out.append(HittingEstimate(lower=float(lower[j]), residual_mass=float(survival[j]),
                                   T=t, status=status))
    return out


# ---------------------------------------------------------------------------
# Monte Carlo trajectories
# ---------------------------------------------------------------------------

_BLOCK = 1024


def _run_trial(s: GraphSchedule, start: int, rng: np.random.Generator,
               stop_kind: str, target_mask, horizon: int) -> tuple[int, bool]:
    """One trajectory; returns (stop time, censored)."""
    x = int(start)
    n = s.n
    if stop_kind == "hit" and target_mask[x]:
        return 0, False
    visited = None
    remaining = 0
    if stop_kind == "cover":
        visited = np.zeros(n, dtype=bool)
        visited[x] = True
        remaining = n - 1
        if remaining == 0:
            return 0, False
    t = 0
    while t < horizon:
        count = min(_BLOCK, horizon - t)
        coins = rng.random(count)
        picks = rng.random(count)
        for i in range(count):
            t += 1
            if coins[i] >= 0.5:
                g = s.step(t)
                lo, hi = g.adj_indptr[x], g.adj_indptr[x + 1]
                deg = hi - lo
                if deg > 0:
                    x = int(g.adj_indices[lo + int(picks[i] * deg)])
            if stop_kind == "hit":
                if target_mask[x]:
                    return t, False
            elif stop_kind == "cover":
                if not visited[x]:
                    visited[x] = True
                    remaining -= 1
                    if remaining == 0:
                        return t, False
    return horizon, stop_kind != "horizon"


def monte_carlo(s: GraphSchedule, start: int, seed: int, trials: int, stop,
                horizon: int = 1_000_000) -> MonteCarloSummary:
    """Seeded trajectory sampling.

    ``stop`` is ("hit", target), ("cover",) or ("horizon",).  Per-trial
    generators come from SeedSequence(seed).spawn, so any execution order
    yields the same statistics; censored trials are flagged, never dropped.
    """
    if trials < 1:
        raise GraphError("need at least one trial")
    kind = stop[0]
    if kind not in ("hit", "cover", "horizon"):
        raise GraphError(f"unknown stop rule {kind!r}")
    target_mask = _target_mask(s.n, stop[1]) if kind == "hit" else None
    children = np.random.SeedSequence(seed).spawn(trials)
    times = np.zeros(trials, dtype=np.int64)
    censored = np.zeros(trials, dtype=bool)
    for j in range(trials):
        times[j], censored[j] = _run_trial(s, start, np.random.default_rng(children[j]),
                                           kind, target_mask, horizon)
    good = times[~censored]
    mean = float(good.mean()) if good.size else float("nan")
    stderr = float(good.std(ddof=1) / np.sqrt(good.size)) if good.size > 1 else float("nan")
    return MonteCarloSummary(times=times, censored=censored, mean=mean, stderr=stderr,
                             trials=trials, n_censored=int(censored.sum()), seed=seed)


# ---------------------------------------------------------------------------
# inequality verifiers
# ---------------------------------------------------------------------------

def dirichlet_form_step(g, f, pi) -> float:
    """E_P(f,f) for the lazy step of g under pi, summed over edges.

    Uses the per-edge flow pi(u) P(u,v) = pi(u)/(2 d_u), valid for any pi
    satisfying detailed balance with the step (flows are symmetric).
    """
    if g.m == 0:
        return 0.0
    pi = chain._pi_array(pi)
    f = np.asarray(f, float)
    u, v = g.edges[:, 0], g.edges[:, 1]
    w = pi[u] * 0.5 / g.degree[u]
    diff = f[u] - f[v]
    return float(np.sum(w * diff * diff))


@dataclass
class DecayCheck:
    t: int
    var_before: float
    var_after: float
    dirichlet: float
    margin: float
    ok: bool


def variance_decay_checks(s: GraphSchedule, p0, steps: int, pi,
                          tol: float = DECAY_TOL) -> list[DecayCheck]:
    """Per-step check of Var rho^(t) - Var rho^(t+1) >= E_{P^(t+1)}(rho^(t))."""
    pi = chain._pi_array(pi)
    trace = evolve_trace(s, p0, steps)
    out = []
    var_prev = chain.variance_pi(trace[0] / pi, pi)
    for t in range(steps):
        rho = trace[t] / pi
        e = dirichlet_form_step(s.step(t + 1), rho, pi)
        var_next = chain.variance_pi(trace[t + 1] / pi, pi)
        margin = (var_prev - var_next) - e
        out.append(DecayCheck(t=t, var_before=var_prev, var_after=var_next,
                              dirichlet=e, margin=margin, ok=margin >= -tol))
        var_prev = var_next
    return out


@dataclass
class DeviationCheck:
    t: int
    u: int
    deviation: float
    var_drop: float
    bound: float
    margin: float
    ok: bool


def ratio_deviation_checks(s: GraphSchedule, p0, steps: int, pi,
                           tol: float = DECAY_TOL) -> list[DeviationCheck]:
    """For each t, the strongest triggered instance of the pointwise-deviation
    bound: Var rho^(0) - Var rho^(t) >= 2 eps^2 pi(u) / t with
    eps = |rho^(t)(u) - rho^(0)(u)|."""
    pi = chain._pi_array(pi)
    trace = evolve_trace(s, p0, steps)
    rho0 = trace[0] / pi
    var0 = chain.variance_pi(rho0, pi)
    out = []
    for t in range(1, steps + 1):
        rho = trace[t] / pi
        dev = np.abs(rho - rho0)
        bounds = 2.0 * dev * dev * pi / t
        u = int(np.argmax(bounds))
        drop = var0 - chain.variance_pi(rho, pi)
        margin = drop - bounds[u]
        out.append(DeviationCheck(t=t, u=u, deviation=float(dev[u]), var_drop=drop,
                                  bound=float(bounds[u]), margin=margin,
                                  ok=margin >= -tol))
    return out


@dataclass
class WindowDecayCheck:
    t1: int
    w: int
    var_drop: float
    dirichlet_avg: float
    bound: float
    gap: float
    var_start: float
    margin: float
    ok: bool
    normalized_margin: float  # E_Pbar(rho) - gap * Var(rho); the second chained
    normalized_ok: bool       # inequality is only asserted in this form


def window_average_decay_check(s: GraphSchedule, t1: int, w: int, p0, pi,
                               tol: float = DECAY_TOL) -> WindowDecayCheck:
    """Var rho^(t1) - Var rho^(t1+w) >= E_{Pbar}(rho^(t1), rho^(t1)) / (15 w).

    The chained lower bound through the spectral gap is checked in its
    normalized form E_Pbar(rho, rho) >= gap * Var_pi(rho), the shape the
    variational definition of the gap actually guarantees.
    """
    from .schedule import window_average

    pi = chain._pi_array(pi)
    trace = evolve_trace(s, p0, t1 + w)
    rho_start = trace[t1] / pi
    var_start = chain.variance_pi(rho_start, pi)
    drop = var_start - chain.variance_pi(trace[t1 + w] / pi, pi)
    wa = window_average(s, t1, w, pi=pi)
    e_avg = chain.dirichlet_form(wa.matrix, rho_start, pi)
    bound = e_avg / (15.0 * w)
    margin = drop - bound
    norm_margin = e_avg - wa.gap * var_start
    return WindowDecayCheck(t1=t1, w=w, var_drop=drop, dirichlet_avg=e_avg, bound=bound,
                            gap=wa.gap, var_start=var_start, margin=margin,
                            ok=margin >= -tol, normalized_margin=norm_margin,
                            normalized_ok=norm_margin >= -tol)


@dataclass
class MidpointCheck:
    u: int
    v: int
    t1: int
    t2: int
    lhs: float
    term_u: float
    term_v: float
    rhs: float
    margin: float
    ok: bool
    alt_rhs: float  # the alternative split convention, for comparison
    alt_ok: bool


def verify_midpoint_bound(s: GraphSchedule, u: int, v: int, t1: int, t2: int, pi,
                          tol: float = DECAY_TOL) -> MidpointCheck:
    """|rho^[t1,t2]_{v,u} - 1| against the worse of the two half-window variances.

    Asserts the adjoint split at mid = floor((t1+t2)/2): the first
    half-window (t1+1..mid) is applied forward to the point likelihood at v,
    the second half-window (mid+1..t2) is applied in reverse order (step t2
    first) to the point likelihood at u; reversibility makes the reversed
    product the adjoint of the forward one, and Cauchy-Schwarz then gives the
    bound for this (or any) split point.  A second circulating convention,
    which splits one step earlier and anchors the v-side product at step 1,
    is evaluated alongside and reported, so disagreements between the two
    conventions stay visible.
    """
    if not t1 < t2:
        raise GraphError("need t1 < t2")
    pi = chain._pi_array(pi)
    n = s.n
    e_u = np.zeros(n)
    e_u[u] = 1.0
    e_v = np.zeros(n)
    e_v[v] = 1.0

    p = e_v.copy()
    for t in range(t1 + 1, t2 + 1):
        p = p @ s.step_matrix(t)
    lhs = abs(p[u] / pi[u] - 1.0)

    mid = (t1 + t2) // 2

    def _variance_after(p_start, ts):
        q = p_start.copy()
        for t in ts:
            q = q @ s.step_matrix(t)
        return chain.variance_pi(q / pi, pi)

    term_v = _variance_after(e_v, range(t1 + 1, mid + 1))
    term_u = _variance_after(e_u, range(t2, mid, -1))
    rhs = max(term_u, term_v)

    if mid >= 1:
        alt_u = _variance_after(e_u, range(t2, mid - 1, -1))
        alt_v = _variance_after(e_v, range(1, mid))
        alt_rhs = max(alt_u, alt_v)
        alt_ok = alt_rhs - lhs >= -tol
    else:
        # the alternative convention would reference step 0; undefined here
        alt_rhs = float("nan")
        alt_ok = True

    margin = rhs - lhs
    return MidpointCheck(u=u, v=v, t1=t1, t2=t2, lhs=lhs, term_u=term_u, term_v=term_v,
                         rhs=rhs, margin=margin, ok=margin >= -tol,
                         alt_rhs=alt_rhs, alt_ok=alt_ok)
