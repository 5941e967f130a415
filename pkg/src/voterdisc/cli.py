"""Command line entry point: ``voterdisc <verb> [flags]``."""

import argparse
import json
import sys

import numpy as np

from . import analytic, dual, graph, harness, voter
from .rng import AUX, GRAPH, RUN, derive_seed, make_rng
from .stats import parse_grid

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def _common(p, n=1000, replicas=None):
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--u", type=float, default=0.5)
    p.add_argument("--replicas", type=int, default=replicas)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="output path prefix")
    p.add_argument("--fixed-graph", action="store_true")
    p.add_argument("--t-cap", type=float, default=None)
    p.add_argument("--grid", default=None, help="lin:a:b:k or geo:a:b:k")


def build_parser():
    ap = argparse.ArgumentParser(prog="voterdisc", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen-graph", help="sample a random d-regular graph")
    _common(p)

    p = sub.add_parser("fd-curve", help="tabulate f_d(t) and the predicted discordance")
    _common(p)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--finite-n", action="store_true", help="include the exp(-2 theta t/n) factor")

    p = sub.add_parser("simulate", help="one voter-model run, recorded on a time grid")
    _common(p)
    p.add_argument("--graph", default=None, help="edge-list file to use instead of sampling")

    p = sub.add_parser("dual", help="meeting or coalescence time samples")
    _common(p, replicas=100)
    p.add_argument("--mode", choices=["stationary", "pair", "coalescence"], default="stationary")
    p.add_argument("--x", type=int, default=0)
    p.add_argument("--y", type=int, default=1)

    p = sub.add_parser("experiment", help="run a named experiment and check its tolerances")
    p.add_argument("kind", choices=harness.KINDS)
    _common(p)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="extra experiment parameter; VALUE is parsed as JSON when possible")
    return ap


def _parse_params(items):
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _emit(args, header, rows, summary):
    if args.out:
        harness.write_csv(f"{args.out}.data.csv", header, rows)
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        harness.write_csv("/dev/stdout", header, rows)


def cmd_gen_graph(args):
    g = graph.generate_regular(args.n, args.d, args.seed)
    if args.out:
        with open(f"{args.out}.graph.txt", "w") as fh:
            graph.save_graph(g, fh)
        summary = {"n": g.n, "d": g.d, "m": g.m, "seed": args.seed, "connected": graph.is_connected(g)}
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        graph.save_graph(g, sys.stdout)
    return EXIT_OK


def cmd_fd_curve(args):
    times = parse_grid(args.grid or "lin:0:5:51")
    rows = analytic.fd_table(args.d, times, args.u, args.n if args.finite_n else None, args.eps)
    summary = {"d": args.d, "u": args.u, "theta": analytic.theta(args.d), "eps": args.eps,
               "n": args.n if args.finite_n else None}
    _emit(args, ["t", "f_d", "prediction"], rows, summary)
    return EXIT_OK


def cmd_simulate(args):
    if args.graph:
        g = graph.load_graph(args.graph)
    else:
        g = graph.generate_regular(args.n, args.d, derive_seed(args.seed, GRAPH))
    times = parse_grid(args.grid or f"lin:0:{args.t_cap or 5 * g.n}:501")
    state = voter.init_bernoulli(g, args.u, make_rng(args.seed, RUN))
    tr = voter.run_recorded(state, times)
    summary = {"n": g.n, "d": g.d, "u": args.u, "seed": args.seed, "final_t": state.t,
               "consensus": state.is_consensus()}
    _emit(args, ["t", "b_density", "d_density"], list(tr.rows()), summary)
    return EXIT_OK


def cmd_dual(args):
    rows = []
    cap = args.t_cap or 20.0 * args.n
    for i in range(args.replicas):
        if args.fixed_graph:
            g = graph.generate_regular(args.n, args.d, derive_seed(args.seed, GRAPH))
        else:
            g = graph.generate_regular(args.n, args.d, derive_seed(args.seed, GRAPH, args.n, i))
        rng = make_rng(args.seed, AUX, i)
        if args.mode == "stationary":
            t, label = dual.meeting_time_stationary(g, cap, rng), "met"
        elif args.mode == "pair":
            t, label = dual.meeting_time_pair(g, args.x, args.y, cap, rng), "met"
        else:
            t, label = dual.coalescence_time(g, cap, rng), "coalesced"
        rows.append((i, label if t is not None else "censored", "" if t is None else repr(float(t))))
    done = [float(r[2]) for r in rows if r[2] != ""]
    summary = {"mode": args.mode, "n": args.n, "d": args.d, "replicas": args.replicas, "t_cap": cap,
               "censored": args.replicas - len(done),
               "mean": float(np.mean(done)) if done else None}
    _emit(args, ["replica", "outcome", "time"], rows, summary)
    return EXIT_OK


def cmd_experiment(args):
    spec = harness.ExperimentSpec(
        kind=args.kind, n=args.n, d=args.d, u=args.u, replicas=args.replicas, grid=args.grid,
        seed=args.seed, workers=args.workers, out=args.out, fixed_graph=args.fixed_graph,
        t_cap=args.t_cap, params=_parse_params(args.param),
    )
    summary = harness.run_experiment(spec)
    for line in summary.report_lines():
        print(line)
    return EXIT_OK if summary.passed else EXIT_FAIL


COMMANDS = {
    "gen-graph": cmd_gen_graph,
    "fd-curve": cmd_fd_curve,
    "simulate": cmd_simulate,
    "dual": cmd_dual,
    "experiment": cmd_experiment,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
