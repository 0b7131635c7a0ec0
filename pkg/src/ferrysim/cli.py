"""Experiment runner.

    ferrysim run       --scenario PATH [--out DIR] [--seed N] [--set k=v ...]
    ferrysim sweep     --scenario PATH --key dotted.key --values v1,v2,...
    ferrysim oracle    --scenario PATH            (mobility LP / tcp bounds)
    ferrysim reproduce EXPERIMENT-ID | all
    ferrysim validate  --scenario PATH

Exit codes: 0 ok, 2 scenario/parse error, 3 invariant violation during a run,
4 reproduce found failing checks.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List

from . import experiments
from .core import scenario as scen
from .core.metrics import OutOfOrderRecord
from .icn.engine import LineDelaySim, TwoScaleRcSim
from .icn.grid import GridBpsrSim, GridFlow
from .icn.mobility import ring_chain
from .core.topology import build_grid
from .mule.engine import MuleSim
from .mule.lp import CostModel, Flow, Infeasible, Route, reference_lp_solve
from .tcp.analysis import solve_beta, throughput_lower_bound
from .tcp.channel import bimodal
from .tcp.engine import MultipathSim


class InvariantViolation(RuntimeError):
    pass


def _build_mobility(cfg: scen.ScenarioConfig):
    p = cfg.params
    spm = float(p.get("slots_per_min", 60.0))
    routes = [Route(r["name"], dict(r["visits"]), r["duration_min"] * spm,
                    cost=float(r.get("cost", 0.0)), floor=float(r.get("floor", 0.0)))
              for r in p["routes"]]
    pickup = {}
    for r in p["routes"]:
        for node, a in r.get("pickup_cost", {}).items():
            pickup[(node, r["name"])] = float(a)
    flows = [Flow(f["source"], f["dest"], f["rate_per_min"] / spm) for f in p["flows"]]
    costs = CostModel(pickup=pickup, K=float(p.get("K", 1.0)), kappa=p.get("kappa"))
    sim = MuleSim(routes, flows, costs, eta_p=float(p.get("eta_p", 100)),
                  eta_d=float(p.get("eta_d", 100)), kappa=p.get("kappa"),
                  variant=p.get("variant", "practical"),
                  forced_cycle=p.get("forced_cycle"),
                  arrivals=p.get("arrivals", "poisson"), seed=cfg.seed,
                  run_id=cfg.run_id, record_every=int(p.get("record_every", 10)))
    return sim, spm


def _run_scenario(cfg: scen.ScenarioConfig):
    """Run one scenario; returns (sink, summary dict)."""
    p = cfg.params
    if cfg.kind == "mobility":
        sim, spm = _build_mobility(cfg)
        res = sim.run(min_slots=float(p.get("minutes", 1000)) * spm,
                      warmup_fraction=float(p.get("warmup_fraction", 0.5)))
        summary = {
            "selections": res.selections,
            "splits_pkts_per_min": {"%s@%s" % k: v * spm for k, v in sorted(res.splits.items())},
            "route_fractions": {k: v for k, v in sorted(res.f.items())},
            "max_queue": res.max_q,
            "avg_cost_rate": res.avg_cost_rate,
        }
        return res.sink, summary
    if cfg.kind == "icn_line_delay":
        sim = LineDelaySim(n_c=int(p.get("n_c", 5)), T=int(p.get("T", 200)),
                           gamma=float(p.get("gamma", 0.2)), mode=p.get("mode", "bpsr"),
                           seed=cfg.seed, right=int(p.get("right", 3)),
                           eta=int(p.get("eta", 1)),
                           contact_budget=p.get("contact_budget"), run_id=cfg.run_id)
        res = sim.run(int(p.get("horizon", 120 * int(p.get("T", 200)))))
        summary = {
            "mean_pickup_delay": res.mean_pickup_delay,
            "picked": res.picked, "created": res.created,
            "hop_bound_violations": res.hop_bound_violations,
            "max_u_source": res.max_u_source, "max_u_gateway": res.max_u_gateway,
        }
        if res.created != res.delivered + res.in_flight:
            raise InvariantViolation(
                "packet conservation broke at slot %d: %d created != %d delivered "
                "+ %d in flight" % (int(p.get("horizon", 0)), res.created,
                                    res.delivered, res.in_flight))
        return sim.sink, summary
    if cfg.kind == "icn_grid_bpsr":
        T = int(p.get("T", 400))
        topo = build_grid(int(p.get("rows", 3)), int(p.get("cols", 4)),
                          clusters=int(p.get("clusters", 3)),
                          gateways_per_cluster=int(p.get("gateways_per_cluster", 2)),
                          mobiles=2)
        ring1 = [topo.gateways[c][0] for c in sorted(topo.gateways)]
        ring2 = [topo.gateways[c][1] for c in sorted(topo.gateways)]
        budget = int(p.get("contact_budget", 1500))
        fwd, stay = float(p.get("forward", 0.8)), float(p.get("stay", 0.1))
        mobiles = [ring_chain("0.100", ring1, fwd, stay, contact_budget=budget),
                   ring_chain("0.101", ring2, fwd, stay, contact_budget=budget,
                              direction=-1)]
        xr = float(p.get("inter_rate", 0.2))
        ir = float(p.get("intra_rate", 0.3))
        inter = [GridFlow("1.105", "2.106", xr), GridFlow("2.101", "3.110", xr),
                 GridFlow("3.105", "1.106", xr)]
        intra = [GridFlow("1.101", "1.110", ir), GridFlow("2.105", "2.102", ir),
                 GridFlow("3.101", "3.106", ir)]
        sim = GridBpsrSim(topo, T, mobiles, inter, intra,
                          eta=int(p.get("eta", 10)), seed=cfg.seed, run_id=cfg.run_id)
        res = sim.run(int(p.get("horizon", 30 * T)))
        summary = {
            "delivered": {"%s->%s" % k: v for k, v in sorted(res.delivered.items())},
            "mean_inter_delay": res.mean_inter_delay,
            "max_internal_type1": res.max_internal_type1,
            "max_gateway_overlay": res.max_gateway_overlay,
        }
        return res.sink, summary
    if cfg.kind == "icn_two_scale":
        sim = TwoScaleRcSim(K1=float(p.get("K1", 200)), K2=float(p.get("K2", 200)),
                            T=int(p.get("T", 400)), mode=p.get("mode", "two_scale"),
                            seed=cfg.seed, beta=float(p.get("beta", 0.25)),
                            kappa=int(p.get("kappa", 3)), eta=int(p.get("eta", 3)),
                            contact_budget=p.get("contact_budget"),
                            shadow_blues_per_red=int(p.get("shadow_blues_per_red", 0)),
                            rate_unit=float(p.get("rate_unit", 100.0)),
                            run_id=cfg.run_id,
                            record_every=int(p.get("record_every", 500)))
        horizon = int(p.get("horizon", 280_000))
        res = sim.run(horizon, measure_from=p.get("measure_from"))
        summary = {
            "inter_rate": res.inter_rate, "intra_rate": res.intra_rate,
            "inter_data_rate": res.inter_data_rate,
            "mean_inter_delay": res.mean_inter_delay,
            "useful_fraction": res.useful_fraction,
            "max_gateway_overlay": res.max_gateway_overlay,
        }
        return res.sink, summary
    if cfg.kind == "tcp_multipath":
        profile = bimodal(float(p.get("p_low", 0.1)), float(p.get("weight_low", 0.1)),
                          p_high=float(p.get("p_high", 1.0)),
                          hold_lo=float(p.get("hold_lo", 100.0)),
                          hold_hi=float(p.get("hold_hi", 200.0)))
        sim = MultipathSim(int(p.get("paths", 4)), int(p.get("total_capacity", 200)),
                           profile, mode=p.get("mode", "rlc"),
                           redundancy=p.get("redundancy"), seed=cfg.seed,
                           grace=int(p.get("grace", 2)),
                           fec_rate=float(p.get("fec_rate", 0.1)),
                           aqm_rho=p.get("aqm_rho"), run_id=cfg.run_id,
                           record_every=int(p.get("record_every", 200)))
        res = sim.run(int(p.get("horizon", 30_000)), measure_from=p.get("measure_from"))
        summary = {
            "goodput": res.goodput, "mean_window": res.mean_window,
            "goodput_fraction_of_EP_C": res.goodput / (profile.mean_p * res.total_capacity),
            "mean_path_windows": res.mean_path_windows,
        }
        return res.sink, summary
    raise scen.ScenarioError("unhandled scenario kind %r" % cfg.kind)


def _load(args) -> scen.ScenarioConfig:
    with open(args.scenario, "rb") as fh:
        text = fh.read().decode("utf-8")
    if getattr(args, "set", None):
        text = scen.apply_overrides(text, args.set)
    cfg = scen.loads(text)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def _write_outputs(out_dir: str, cfg: scen.ScenarioConfig, sink, summary) -> str:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "%s.csv" % cfg.run_id)
    sink.write_csv(csv_path)
    with open(os.path.join(out_dir, "%s.summary.json" % cfg.run_id), "w",
              encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path


def cmd_run(args) -> int:
    cfg = _load(args)
    sink, summary = _run_scenario(cfg)
    csv_path = _write_outputs(args.out, cfg, sink, summary)
    print("run %s: wrote %s" % (cfg.run_id, csv_path))
    for key, value in sorted(summary.items()):
        print("  %s: %s" % (key, value))
    return 0


def _sweep_one(payload):
    text, seed, suffix = payload
    cfg = scen.loads(text)
    if seed is not None:
        cfg.seed = seed
    cfg.run_id = "%s-%s" % (cfg.run_id, suffix)
    sink, summary = _run_scenario(cfg)
    return cfg.run_id, sink.to_csv(), summary


def cmd_sweep(args) -> int:
    with open(args.scenario, "rb") as fh:
        base = fh.read().decode("utf-8")
    if args.set:
        base = scen.apply_overrides(base, args.set)
    values = args.values.split(",")
    jobs = []
    for v in values:
        text = scen.apply_overrides(base, ["%s=%s" % (args.key, v)])
        jobs.append((text, args.seed, v.strip()))
    results = []
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    os.makedirs(args.out, exist_ok=True)
    combined = []
    for v, (run_id, csv_text, summary) in zip(values, results):
        sub = os.path.join(args.out, "%s=%s" % (args.key.replace(".", "_"), v.strip()))
        os.makedirs(sub, exist_ok=True)
        with open(os.path.join(sub, "%s.csv" % run_id), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(csv_text)
        with open(os.path.join(sub, "%s.summary.json" % run_id), "w",
                  encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        combined.append((v.strip(), summary))
    table = os.path.join(args.out, "sweep_summary.json")
    with open(table, "w", encoding="utf-8") as fh:
        json.dump({"key": args.key, "rows": [{"value": v, **s} for v, s in combined]},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("sweep over %s: %d runs, summary in %s" % (args.key, len(values), table))
    for v, s in combined:
        head = {k: s[k] for k in list(sorted(s))[:3]}
        print("  %s=%s: %s" % (args.key, v, head))
    return 0


def cmd_oracle(args) -> int:
    cfg = _load(args)
    p = cfg.params
    if cfg.kind == "mobility":
        sim, spm = _build_mobility(cfg)
        try:
            f, y, cost = reference_lp_solve(sim.routes, sim.flows, sim.costs,
                                            sim.eta_p, sim.eta_d)
        except Infeasible as exc:
            print("infeasible: %s" % exc)
            return 0
        print("LP optimum (cost %.6f):" % cost)
        for name in sorted(f):
            print("  f[%s] = %.6f" % (name, f[name]))
        for (l, rname), rate in sorted(y.items()):
            print("  y[%s@%s] = %.6f pkts/min" % (l, rname, rate * spm))
        return 0
    if cfg.kind == "tcp_multipath":
        profile = bimodal(float(p.get("p_low", 0.1)), float(p.get("weight_low", 0.1)))
        M = int(p.get("paths", 4))
        C = int(p.get("total_capacity", 200)) // M
        rho = 1.2
        sol = solve_beta(M, C, rho, profile)
        bound, regime = throughput_lower_bound(M, C, rho, profile)
        print("beta solve: regime=%s beta=%s residual=%.3e"
              % (sol.regime, sol.beta, sol.residual))
        print("throughput lower bound (rho=%.2f): %.3f pkts/slot [%s]"
              % (rho, bound, regime))
        return 0
    print("no oracle defined for scenario kind %r" % cfg.kind)
    return 0


def cmd_reproduce(args) -> int:
    names = sorted(experiments.EXPERIMENTS) if args.experiment == "all" \
        else [args.experiment]
    failed = False
    for name in names:
        try:
            report = experiments.run_experiment(name)
        except KeyError as exc:
            print(str(exc.args[0]))
            return 2
        print("== %s ==" % name)
        for line in report.lines():
            print(line)
        failed = failed or not report.passed
    return 4 if failed else 0


def cmd_validate(args) -> int:
    cfg = _load(args)
    print("scenario ok: kind=%s seed=%d run_id=%s (%d parameters)"
          % (cfg.kind, cfg.seed, cfg.run_id, len(cfg.params)))
    return 0


def main(argv: List[str] = None) -> int:
    parser = argparse.ArgumentParser(prog="ferrysim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("--scenario", required=True)
        sp.add_argument("--out", default="out")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--set", action="append", default=[],
                        metavar="key=value", help="override a scenario key")
        sp.add_argument("--parallel", type=int, default=1)

    common(sub.add_parser("run", help="execute one scenario"))
    sp = sub.add_parser("sweep", help="run a scenario once per value of a key")
    common(sp)
    sp.add_argument("--key", required=True, help="dotted scenario key to vary")
    sp.add_argument("--values", required=True, help="comma-separated values")
    common(sub.add_parser("oracle", help="print the analytic reference for a scenario"))
    sp = sub.add_parser("reproduce", help="run a documented experiment check")
    sp.add_argument("experiment", help="experiment id or 'all' (known: %s)"
                    % ", ".join(sorted(experiments.EXPERIMENTS)))
    common(sub.add_parser("validate", help="parse and check a scenario file"))

    args = parser.parse_args(argv)
    try:
        if args.verb == "run":
            return cmd_run(args)
        if args.verb == "sweep":
            return cmd_sweep(args)
        if args.verb == "oracle":
            return cmd_oracle(args)
        if args.verb == "reproduce":
            return cmd_reproduce(args)
        if args.verb == "validate":
            return cmd_validate(args)
    except scen.ScenarioError as exc:
        print("scenario error: %s" % exc, file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("scenario error: %s" % exc, file=sys.stderr)
        return 2
    except (InvariantViolation, OutOfOrderRecord) as exc:
        print("invariant violation: %s" % exc, file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
