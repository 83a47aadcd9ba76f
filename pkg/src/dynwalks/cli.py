"""Command-line interface.

Verbs: gen, mix, hit, cover, verify <inequality-id>, commute, suite <name>.
CSV reports land in --out or $DYNWALKS_OUTDIR (default ./reports); exit
status is 0 only if every checked bound passed.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import commute as commute_mod
from . import constructions, graphs, schedule, walks
from .reporting import (
    BoundReport,
    default_out_dir,
    summarize,
    write_report_csv,
)
from .suites import INEQUALITY_TO_SUITE, SUITES, ExperimentConfig, run_suite


def _add_common(p):
    p.add_argument("--schedule", help="schedule JSON file")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--tmax", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--out", help="output file or directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynwalks")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="build a construction and write its schedule file")
    g.add_argument("construction", choices=[
        "expander_matching", "random_regular", "complete_then_cycle", "nomixing",
        "nohitting", "nohitting_doubled", "torus_schedule", "circulant", "barbell"])
    g.add_argument("--d", type=int, help="degree (random_regular)")
    g.add_argument("--t", type=int, help="step budget (nomixing)")
    g.add_argument("--c", type=float, help="complete-phase constant")
    g.add_argument("--dim", type=int, help="torus dimension")
    g.add_argument("--side", type=int, help="torus side")
    g.add_argument("--rho", type=int, help="circulant connectivity parameter")
    _add_common(g)

    m = sub.add_parser("mix", help="exact l2 mixing time of a schedule")
    m.add_argument("--threshold", type=float, default=1.0 / 3.0)
    m.add_argument("--horizon", type=int)
    _add_common(m)

    hp = sub.add_parser("hit", help="exact expected hitting time (absorbing propagation)")
    hp.add_argument("--u", type=int, required=True)
    hp.add_argument("--v", type=int, required=True)
    _add_common(hp)

    c = sub.add_parser("cover", help="Monte Carlo cover time")
    c.add_argument("--start", type=int, default=0)
    c.add_argument("--horizon", type=int, default=1_000_000)
    _add_common(c)

    v = sub.add_parser("verify", help="verify one named inequality")
    v.add_argument("inequality", choices=sorted(INEQUALITY_TO_SUITE))
    v.add_argument("--seeds", type=int, help="number of seeded instances (scales the run down)")
    _add_common(v)

    cm = sub.add_parser("commute", help="commute-time bounds table for a static graph")
    cm.add_argument("--graph", help="graph text file ('n m' then edge lines)")
    cm.add_argument("--family", default="gnp_connected")
    cm.add_argument("--p", type=float, default=0.5)
    cm.add_argument("--rho", type=int)
    cm.add_argument("--s", type=int)
    cm.add_argument("--t", type=int)
    _add_common(cm)

    st = sub.add_parser("suite", help="run a named verification suite (or 'all')")
    st.add_argument("name", choices=sorted(SUITES) + ["all"])
    st.add_argument("--sizes", type=int, nargs="*")
    st.add_argument("--seeds", type=int, help="number of seeded instances")
    _add_common(st)
    return ap


def _load_schedule_arg(args) -> schedule.GraphSchedule:
    if not args.schedule:
        raise SystemExit("--schedule is required for this command")
    return schedule.load_schedule(args.schedule)


def _cmd_gen(args) -> int:
    params = {}
    if args.n is not None:
        params["n"] = args.n
    for key in ("d", "t", "c", "dim", "side", "rho"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    spec = constructions.ConstructionSpec(name=args.construction, params=params,
                                          seed=args.seed)
    s = constructions.build(spec)
    out = args.out or f"{args.construction}.json"
    schedule.save_schedule(s, out)
    print(f"{out} hash={schedule.schedule_hash(s)} n={s.n} kind={s.kind}")
    return 0


def _cmd_mix(args) -> int:
    s = _load_schedule_arg(args)
    pi = schedule.validate_common_stationary(s, horizon=args.horizon or 100).pi
    t = walks.measure_mixing(s, pi, threshold=args.threshold,
                             horizon=args.horizon)
    print(f"t_mix={t}")
    if args.out:
        rep = BoundReport(suite="cli", inequality_id="mix", instance=args.schedule,
                          lhs=float(t), rhs=float(t), tolerance=0.0,
                          provenance="DERIVED", n=s.n,
                          schedule_hash=schedule.schedule_hash(s))
        write_report_csv(args.out, [rep])
    return 0


def _cmd_hit(args) -> int:
    s = _load_schedule_arg(args)
    est = walks.exact_hitting(s, args.u, args.v, t_max=args.tmax,
                              eps=args.eps or 1e-9)
    print(f"hit({args.u}->{args.v}) lower={est.lower:.6f} residual={est.residual_mass:.3e} "
          f"T={est.T} status={est.status}")
    if args.out:
        rep = BoundReport(suite="cli", inequality_id="hit",
                          instance=f"u={args.u} v={args.v}", lhs=est.lower,
                          rhs=est.lower, tolerance=0.0, provenance="DERIVED",
                          n=s.n, schedule_hash=schedule.schedule_hash(s),
                          status=est.status,
                          extra={"residual": est.residual_mass, "T": est.T})
        write_report_csv(args.out, [rep])
    return 0


def _cmd_cover(args) -> int:
    s = _load_schedule_arg(args)
    mc = walks.monte_carlo(s, args.start, seed=args.seed,
                           trials=args.trials or 100, stop=("cover",),
                           horizon=args.horizon)
    print(f"cover mean={mc.mean:.2f} stderr={mc.stderr:.2f} "
          f"censored={mc.n_censored}/{mc.trials} seed={mc.seed}")
    return 0


def _cmd_verify(args) -> int:
    cfg = ExperimentConfig(
        suite=INEQUALITY_TO_SUITE[args.inequality],
        seeds=list(range(args.seeds)) if args.seeds else None,
        trials=args.trials, tmax=args.tmax, eps=args.eps, out=args.out)
    reports, path, ok = run_suite(cfg)
    digest, _ = summarize([path])
    print(digest)
    print(f"report: {path}")
    return 0 if ok else 1


def _cmd_commute(args) -> int:
    if args.graph:
        g = graphs.read_graph_text(args.graph)
        gid = os.path.basename(args.graph)
    else:
        if args.n is None:
            raise SystemExit("--n is required without --graph")
        params = {"n": args.n}
        if args.family == "gnp_connected":
            params["p"] = args.p
        if args.family == "circulant":
            params["rho"] = args.rho or 2
        g = graphs.generate(args.family, seed=args.seed, **params)
        gid = f"{args.family}-n{args.n}-seed{args.seed}"
    pairs = ([(args.s, args.t)] if args.s is not None and args.t is not None
             else [(u, v) for u in range(g.n) for v in range(u + 1, g.n)])
    rows = []
    conn_bound = commute_mod.connectivity_bound(g)
    prof = commute_mod.profile_bound(g) if g.is_regular() and g.n <= 20 else None
    for s, t in pairs:
        exact = commute_mod.exact_commute(g, s, t)
        _, bounds = commute_mod.cut_sum_upper(g, s, t)
        nw = commute_mod.nash_williams_lower(
            g, s, t, commute_mod.distance_layer_cutsets(g, s, t))
        rows.append(BoundReport(
            suite="cli-commute", inequality_id="cutsum-sandwich",
            instance=f"{gid} s={s} t={t}",
            lhs=max(nw.flow - exact, exact - bounds.flow), rhs=0.0,
            tolerance=1e-9, provenance="DERIVED", n=g.n, seed=args.seed,
            extra={"exact": exact, "nw_lower_flow": nw.flow,
                   "cutsum_flow": bounds.flow, "cutsum_2m": bounds.literal_2m,
                   "profile_bound": prof, "connectivity_bound": conn_bound,
                   "tight_ratio": bounds.flow / exact}))
    out = args.out or os.path.join(default_out_dir(), "commute.csv")
    write_report_csv(out, rows)
    ok = all(r.passed for r in rows)
    print(f"{len(rows)} pairs -> {out} ({'pass' if ok else 'FAIL'})")
    return 0 if ok else 1


def _cmd_suite(args) -> int:
    names = sorted(SUITES) if args.name == "all" else [args.name]
    paths = []
    ok = True
    for name in names:
        cfg = ExperimentConfig(
            suite=name,
            sizes=args.sizes if args.sizes else None,
            seeds=list(range(args.seeds)) if args.seeds else None,
            trials=args.trials, tmax=args.tmax, eps=args.eps, out=args.out)
        _, path, passed = run_suite(cfg)
        paths.append(path)
        ok = ok and passed
    digest, _ = summarize(paths)
    print(digest)
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "gen": _cmd_gen, "mix": _cmd_mix, "hit": _cmd_hit, "cover": _cmd_cover,
        "verify": _cmd_verify, "commute": _cmd_commute, "suite": _cmd_suite,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
