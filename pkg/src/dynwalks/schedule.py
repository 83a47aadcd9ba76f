"""Evolving graph sequences with a fixed vertex set.

A schedule serves ``step(t)`` for t >= 1.  Three kinds exist: a finite list,
a periodic list (optionally preceded by a finite prefix), and a seeded
generator that materializes steps on demand.  Steps and their lazy matrices
are memoized so repeated traversals stay cheap.
"""

from __future__ import annotations

import hashlib
import json
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import chain
from .errors import GraphError, ValidationError
from .graphs import StaticGraph, is_connected

PI_TOL = 1e-10
_GRAPH_CACHE_CAP = 4096


def _runs_total(runs) -> int:
    return sum(r for _, r in runs)


class GraphSchedule:
    """Sequence of StaticGraphs on one vertex universe.

    Exactly one of the following shapes applies:

    - finite:    ``prefix_runs`` only; ``step(t)`` past the end raises.
    - periodic:  ``cycle_runs`` repeats forever after the optional prefix.
    - generator: ``generator = {"family", "params", "seed"}`` builds steps.

    ``pi`` is the declared common stationary distribution, if any.
    """

    def __init__(self, n, *, prefix_runs=None, cycle_runs=None, generator=None,
                 pi=None, name="", meta=None):
        self.n = int(n)
        self.prefix_runs = list(prefix_runs or [])
        self.cycle_runs = list(cycle_runs) if cycle_runs else None
        self.generator = dict(generator) if generator else None
        if (self.cycle_runs is not None or self.prefix_runs) and self.generator:
            raise GraphError("a schedule is either step-backed or generator-backed")
        self.pi = None if pi is None else np.asarray(pi, dtype=float)
        self.name = name
        self.meta = dict(meta or {})
        for g, rep in self.prefix_runs + (self.cycle_runs or []):
            if g.n != self.n:
                raise GraphError("all steps must share the vertex count")
            if rep < 1:
                raise GraphError("run repeat counts must be >= 1")
        self._graphs = OrderedDict()
        self._matrices = OrderedDict()
        self._prefix_len = _runs_total(self.prefix_runs)
        self._cycle_len = _runs_total(self.cycle_runs) if self.cycle_runs else 0

    @property
    def kind(self) -> str:
        if self.generator is not None:
            return "generator"
        return "periodic" if self.cycle_runs is not None else "finite"

    @property
    def period(self):
        return self._cycle_len if self.kind == "periodic" else None

    @property
    def horizon(self):
        """Last valid step for finite schedules, None otherwise."""
        return self._prefix_len if self.kind == "finite" else None

    def step_key(self, t: int):
        """Canonical cache key: collapses periodic repetition."""
        if t < 1:
            raise GraphError("steps are indexed from 1")
        if self.kind == "generator":
            return ("g", t)
        if t <= self._prefix_len:
            return ("p", self._run_index(self.prefix_runs, t))
        if self.kind == "finite":
            raise GraphError(f"finite schedule has only {self._prefix_len} steps")
        off = (t - self._prefix_len - 1) % self._cycle_len + 1
        return ("c", self._run_index(self.cycle_runs, off))

    @staticmethod
    def _run_index(runs, offset: int) -> int:
        acc = 0
        for i, (_, rep) in enumerate(runs):
            acc += rep
            if offset <= acc:
                return i
        raise GraphError("step offset exceeds runs")

    def step(self, t: int) -> StaticGraph:
        key = self.step_key(t)
        got = self._graphs.get(key)
        if got is not None:
            self._graphs.move_to_end(key)
            return got
        if key[0] == "p":
            g = self.prefix_runs[key[1]][0]
        elif key[0] == "c":
            g = self.cycle_runs[key[1]][0]
        else:
            g = _generator_step(self.n, self.generator, t)
        self._graphs[key] = g
        if len(self._graphs) > _GRAPH_CACHE_CAP:
            self._graphs.popitem(last=False)
        return g

    def step_matrix(self, t: int) -> np.ndarray:
        key = self.step_key(t)
        got = self._matrices.get(key)
        if got is not None:
            self._matrices.move_to_end(key)
            return got
        P = chain.lazy_matrix(self.step(t)).matrix
        self._matrices[key] = P
        cap = 128 if self.n <= 256 else 4
        if len(self._matrices) > cap:
            self._matrices.popitem(last=False)
        return P

    def __repr__(self):
        return f"GraphSchedule(n={self.n}, kind={self.kind!r}, name={self.name!r})"


def _generator_step(n, generator, t) -> StaticGraph:
    from . import constructions  # deferred: constructions imports this module

    fam = constructions.GENERATOR_FAMILIES.get(generator["family"])
    if fam is None:
        raise GraphError(f"unknown schedule generator family {generator['family']!r}")
    g = fam(n, generator.get("params", {}), generator.get("seed"), t)
    if g.n != n:
        raise GraphError("generator produced a graph on the wrong vertex count")
    return g


# ---------------------------------------------------------------------------
# common-stationarity validation
# ---------------------------------------------------------------------------

def pi_step_residual(g: StaticGraph, pi: np.ndarray) -> float:
    """max_v |(pi P)(v) - pi(v)| for the lazy matrix of g, without building it."""
    flow_out = np.zeros(g.n)
    if g.m:
        d = g.degree.astype(float)
        u, v = g.edges[:, 0], g.edges[:, 1]
        np.add.at(flow_out, v, pi[u] * 0.5 / d[u])
        np.add.at(flow_out, u, pi[v] * 0.5 / d[v])
    lazy_part = np.where(g.degree > 0, 0.5 * pi, pi)
    return float(np.abs(lazy_part + flow_out - pi).max())


def validate_common_stationary(s: GraphSchedule, horizon: int, candidate_pi=None
                               ) -> chain.StationaryDistribution:
    """Certify one pi with pi P^(t) = pi for every step up to the horizon.

    For periodic schedules one prefix+period pass suffices and is enforced.
    Candidate order: explicit argument, the schedule's declared pi, then (for
    all-connected schedules with time-invariant degrees) the degree
    stationary distribution of step 1.
    """
    if horizon < 1:
        raise GraphError("horizon must be >= 1")
    if s.kind == "periodic":
        horizon = _runs_total(s.prefix_runs) + s.period
    elif s.kind == "finite":
        horizon = min(horizon, s.horizon)

    pi = candidate_pi if candidate_pi is not None else s.pi
    if pi is not None:
        pi = np.asarray(pi, dtype=float)
        if abs(pi.sum() - 1.0) > PI_TOL or pi.min() < 0:
            raise ValidationError("candidate pi is not a probability distribution")
    else:
        g1 = s.step(1)
        if not is_connected(g1):
            raise ValidationError(
                "step 1 is disconnected and no pi was supplied; disconnected "
                "schedules must declare their stationary distribution", step=1)
        pi = chain.degree_stationary(g1).pi
        ref_deg = g1.degree
        for t in range(1, horizon + 1):
            g = s.step(t)
            if not is_connected(g):
                raise ValidationError(f"step {t} is disconnected; supply pi explicitly", step=t)
            if not np.array_equal(g.degree, ref_deg):
                raise ValidationError(
                    f"degree sequence changes at step {t}; no degree-derived "
                    "common pi exists, supply one explicitly", step=t)

    for t in range(1, horizon + 1):
        res = pi_step_residual(s.step(t), pi)
        if res > PI_TOL:
            raise ValidationError(
                f"pi is not stationary for step {t} (residual {res:.3e})", step=t)
    return chain.StationaryDistribution(pi=pi, pi_star=float(pi[pi > 0].min()))


# ---------------------------------------------------------------------------
# window averages
# ---------------------------------------------------------------------------

@dataclass
class WindowAverage:
    matrix: np.ndarray
    window: tuple[int, int]  # (t1, w): steps t1+1 .. t1+w
    ergodic: bool
    gap: float


def window_union_graph(s: GraphSchedule, t1: int, w: int) -> StaticGraph:
    edges = [s.step(t).edges for t in range(t1 + 1, t1 + w + 1)]
    stacked = np.concatenate([e for e in edges if e.size] or [np.empty((0, 2), np.int64)])
    return StaticGraph(s.n, stacked)


def window_ergodic(s: GraphSchedule, t1: int, w: int) -> bool:
    """Connectivity of the union support graph; laziness supplies aperiodicity."""
    return is_connected(window_union_graph(s, t1, w))


def window_average(s: GraphSchedule, t1: int, w: int, pi=None) -> WindowAverage:
    """Entrywise mean of the w lazy matrices after t1, with its gap."""
    if w < 1:
        raise GraphError("window width must be >= 1")
    M = np.zeros((s.n, s.n))
    for t in range(t1 + 1, t1 + w + 1):
        M += s.step_matrix(t)
    M /= w
    ergodic = window_ergodic(s, t1, w)
    if not ergodic:
        return WindowAverage(matrix=M, window=(t1, w), ergodic=False, gap=0.0)
    if pi is None:
        pi = s.pi
    if pi is None:
        pi = validate_common_stationary(s, t1 + w).pi
    gap = chain.spectral_gap(M, pi)
    return WindowAverage(matrix=M, window=(t1, w), ergodic=True, gap=gap)


def min_window_gap(s: GraphSchedule, w: int, horizon: int, pi=None) -> float:
    """min over window starts t1 < horizon of the average-matrix gap; 0 if any
    window is non-ergodic."""
    if w < 1 or horizon < 1:
        raise GraphError("window width and horizon must be >= 1")
    best = np.inf
    for t1 in range(horizon):
        wa = window_average(s, t1, w, pi=pi)
        if not wa.ergodic:
            return 0.0
        best = min(best, wa.gap)
    return float(best)


# ---------------------------------------------------------------------------
# JSON schedule files (bit-exact round trip)
# ---------------------------------------------------------------------------

def _runs_to_doc(runs):
    return [{"repeat": int(rep), "edges": [[int(u), int(v)] for u, v in g.edges]}
            for g, rep in runs]


def _runs_from_doc(n, doc):
    return [(StaticGraph(n, item["edges"]), int(item["repeat"])) for item in doc]


def schedule_to_doc(s: GraphSchedule) -> dict:
    doc = {"n": s.n, "mode": s.kind}
    if s.kind == "generator":
        doc["generator"] = {
            "family": s.generator["family"],
            "params": s.generator.get("params", {}),
            "seed": s.generator.get("seed"),
        }
    elif s.kind == "periodic":
        doc["steps"] = _runs_to_doc(s.cycle_runs)
        if s.prefix_runs:
            doc["prefix"] = _runs_to_doc(s.prefix_runs)
    else:
        doc["steps"] = _runs_to_doc(s.prefix_runs)
    if s.pi is not None:
        doc["pi"] = [float(x) for x in s.pi]
    if s.name:
        doc["name"] = s.name
    if s.meta:
        doc["meta"] = s.meta
    return doc


def schedule_from_doc(doc: dict) -> GraphSchedule:
    n = int(doc["n"])
    mode = doc["mode"]
    pi = doc.get("pi")
    name = doc.get("name", "")
    meta = doc.get("meta")
    if mode == "generator":
        return GraphSchedule(n, generator=doc["generator"], pi=pi, name=name, meta=meta)
    steps = _runs_from_doc(n, doc.get("steps", []))
    if mode == "periodic":
        prefix = _runs_from_doc(n, doc.get("prefix", []))
        return GraphSchedule(n, prefix_runs=prefix, cycle_runs=steps, pi=pi,
                             name=name, meta=meta)
    if mode == "finite":
        return GraphSchedule(n, prefix_runs=steps, pi=pi, name=name, meta=meta)
    raise GraphError(f"unknown schedule mode {mode!r}")


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def save_schedule(s: GraphSchedule, path) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(schedule_to_doc(s)))
        fh.write("\n")


def load_schedule(path) -> GraphSchedule:
    with open(path) as fh:
        return schedule_from_doc(json.load(fh))


def schedule_hash(s: GraphSchedule) -> str:
    return hashlib.sha256(canonical_json(schedule_to_doc(s)).encode()).hexdigest()[:16]
