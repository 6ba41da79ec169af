"""Command-line entry point ``diagdist``.

Exit codes: 0 success, 2 input error, 3 exact search stopped by its budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import analytic
from .exact_solver import DEFAULT_BUDGET, diagonal_distance
from .experiments import (
    ExperimentConfig,
    curve_to_csv,
    exhaustive_fn,
    parse_grid,
    records_to_csv,
    run_gnp_experiment,
    summarize,
)
from .flip_game import Witness, verify_witness
from .graph_core import GraphError, VertexSet, load_graph
from .heuristic import pair_search

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3

HEURISTIC_COLUMNS = ("schema_id", "n", "a", "samples", "seed", "hamming", "exact_cost", "overestimate",
                     "A", "A_prime", "candidate")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _config_line(**items) -> str:
    return "config: " + " ".join(f"{k}={v}" for k, v in items.items())


def _threads(value: str) -> int:
    if value == "max":
        return os.cpu_count() or 1
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return k


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="graph file (graph6 or edge list)")
    p.add_argument("--format", choices=("graph6", "edges"), default=None,
                   help="file format; inferred from the extension when omitted (.g6/.graph6 -> graph6)")


def cmd_exact(args, out) -> int:
    G = load_graph(args.graph, args.format)
    budget = None if args.budget <= 0 else args.budget
    print(_config_line(graph=args.graph, n=G.n, budget=budget, threads=args.threads), file=out)
    res = diagonal_distance(G, budget=budget, threads=args.threads)
    print(f"f={res.f}", file=out)
    print(res.witness.format_line(), file=out)
    print(f"nodes={res.nodes_explored}", file=out)
    print(f"bound_source={res.bound_source}", file=out)
    print(f"proven_optimal={str(res.proven_optimal).lower()}", file=out)
    return EXIT_OK if res.proven_optimal else EXIT_BUDGET


def cmd_heuristic(args, out) -> int:
    G = load_graph(args.graph, args.format)
    print(_config_line(graph=args.graph, n=G.n, a=args.a, samples=args.samples, seed=args.seed,
                       threads=args.threads), file=out)
    cand = pair_search(G, args.a, args.samples, args.seed, threads=args.threads)
    print(cand.witness(G).format_line(), file=out)
    print(f"cost={cand.exact_cost} hamming={cand.hamming} overestimate={cand.overestimate}", file=out)
    if args.out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEURISTIC_COLUMNS)
        w.writerow(["diagdist-heur-v1", G.n, args.a, args.samples, args.seed, cand.hamming, cand.exact_cost,
                    cand.overestimate, " ".join(map(str, cand.A)), " ".join(map(str, cand.A_prime)),
                    " ".join(map(str, cand.candidate))])
        Path(args.out).write_text(buf.getvalue())
    return EXIT_OK


def cmd_constants(args, out) -> int:
    print(_config_line(tol=args.tol), file=out)
    c = analytic.solve_constants(args.tol)
    print(f"lambda0={c.lambda0!r}", file=out)
    print(f"p0={c.p0!r}", file=out)
    print(f"p0_minor={c.p0_minor!r}", file=out)
    print(f"alpha_half={c.alpha_half!r}", file=out)
    a, bound = analytic.optimize_simple_bound()
    print(f"simple_bound={bound!r}", file=out)
    chk = analytic.covering_contradiction(0.0535, 0.275, 0.45)
    print(f"covering_lhs={chk.lhs:.6f} covering_rhs={chk.rhs:.6f} contradiction={str(chk.contradiction).lower()} "
          f"bound={analytic.covering_upper_constant('0.0535', '0.275')}", file=out)
    return EXIT_OK


def cmd_fhat(args, out) -> int:
    if args.grid < 1:
        raise GraphError("--grid must be positive")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("p", "fhat", "regime"))
    for k in range(1, args.grid + 1):
        p = k / (args.grid + 1)
        value, regime = analytic.predicted_fhat(p)
        w.writerow((f"{p:.10g}", f"{value:.12f}", regime))
    if args.out:
        print(_config_line(grid=args.grid, out=args.out), file=out)
        Path(args.out).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_gv(args, out) -> int:
    print(_config_line(n=args.n), file=out)
    l = analytic.best_gv_bound(args.n)
    print(f"gv_lower_bound l={l} l/n={l / args.n:.6f}", file=out)
    return EXIT_OK


def cmd_firstmoment(args, out) -> int:
    rng = None
    if args.a_min is not None or args.a_max is not None:
        rng = (args.a_min or 1, args.a_max or args.l - 1)
    print(_config_line(n=args.n, p=args.p, l=args.l, a_range=rng or f"1..{args.l - 1}"), file=out)
    fm = analytic.first_moment_sum(args.n, args.p, args.l, rng)
    print(f"sum={fm.value!r} log_sum={fm.log_value!r}", file=out)
    if args.crossover:
        print(f"crossover_l={analytic.first_moment_crossover(args.n, args.p)}", file=out)
    return EXIT_OK


def cmd_experiment(args, out) -> int:
    budget = None if args.budget <= 0 else args.budget
    cfg = ExperimentConfig(args.n, parse_grid(args.p_grid), args.trials, args.seed, budget,
                           out=None, threads=args.threads, timing=not args.no_timing)
    print(_config_line(n=cfg.n, p_grid=",".join(f"{p:g}" for p in cfg.p_grid), trials=cfg.trials,
                       seed=cfg.seed, budget=budget, threads=cfg.threads, out=args.out), file=out)
    records = run_gnp_experiment(cfg)
    if args.out:
        Path(args.out).write_text(records_to_csv(records))
    if args.curve_out:
        Path(args.curve_out).write_text(curve_to_csv(summarize(records), cfg.n, cfg.trials))
    for pt in summarize(records):
        print(f"p={pt.p:g} mean_f/n={pt.mean_f_over_n:.4f} mean_(delta+1)/n={pt.mean_mindeg_over_n:.4f} "
              f"fhat_pred={pt.fhat_pred:.4f} regime_pred={pt.regime_pred}", file=out)
    return EXIT_OK


def cmd_fn(args, out) -> int:
    print(_config_line(n=args.n, include_edgeless=not args.require_edge), file=out)
    res = exhaustive_fn(args.n, include_edgeless=not args.require_edge)
    print(f"f({res.n})={res.f_n} argmax={res.argmax_graph6} graphs={res.graphs} gv_l={res.gv_l}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    G = load_graph(args.graph, args.format)
    verts = [int(x) for x in args.set.replace(",", " ").split()]
    print(_config_line(graph=args.graph, n=G.n, set=",".join(map(str, verts))), file=out)
    A = VertexSet.of(G.n, verts)
    valid, cost = verify_witness(G, A)
    print(Witness.build(G, A).format_line(), file=out)
    print(f"valid={str(valid).lower()} cost={cost}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diagdist", description="Diagonal distance of graphs: exact, heuristic and analytic tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact f(G) by layered subset search")
    _add_graph_args(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="visited-subset limit; <= 0 for none")
    p.add_argument("--threads", type=_threads, default=1)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("heuristic", help="pair-search witness")
    _add_graph_args(p)
    p.add_argument("--a", type=int, required=True, help="size of the paired sets")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_threads, default=1)
    p.add_argument("--out", help="write the candidate as CSV")
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("constants", help="lambda0, p0 and the covering-bound check")
    p.add_argument("--tol", type=float, default=1e-14)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("fhat", help="predicted limit curve as CSV")
    p.add_argument("--grid", type=int, default=99, help="number of interior grid points")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fhat)

    p = sub.add_parser("gv", help="largest l certified by the counting bound")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gv)

    p = sub.add_parser("firstmoment", help="first-moment sum for G(n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a-min", type=int)
    p.add_argument("--a-max", type=int)
    p.add_argument("--crossover", action="store_true", help="also report the least l with sum >= 1")
    p.set_defaults(func=cmd_firstmoment)

    p = sub.add_parser("experiment", help="Monte Carlo on G(n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p-grid", required=True, help="a:b:step or comma list")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="per-solve subset limit; <= 0 for none")
    p.add_argument("--threads", type=_threads, default=1)
    p.add_argument("--out", help="per-trial CSV")
    p.add_argument("--curve-out", help="per-p summary CSV")
    p.add_argument("--no-timing", action="store_true", help="write 0 in the micros column")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("fn", help="f(n) by exhausting labelled graphs (n <= 7)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--require-edge", action="store_true", help="maximise over graphs with at least one edge")
    p.set_defaults(func=cmd_fn)

    p = sub.add_parser("verify", help="play the flip game for a set A")
    _add_graph_args(p)
    p.add_argument("--set", required=True, help="comma-separated vertices of A")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (ValueError, OSError) as exc:
        print(f"diagdist: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
