"""
Command line entry point.

    drfeas solve --algorithm sa-dr --generate polytope:5x10:slack=0.3 \\
        --strings "1,2,3,4,5;6,7,8,9,10" --weights 0.5,0.5 --out run.csv
    drfeas verify --suite operators --seed 1
    drfeas compare runA.csv runB.csv --tol 1e-12

Exit status: 0 on success (converged run, passing checks), 2 when a run
exhausts its iteration budget, 1 on any error or failed check.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .. import algorithms as alg
from ..diagnostics import StopConfig, compare_trajectories
from .generate import default_start, generate, parse_instance_spec
from .io import load_problem, load_run, save_run
from .suites import SUITES, run_suite

ALGORITHMS = ("sa-dr", "bi-dr", "rset-dr", "cyclic-dr", "sdr", "pocs")

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


def parse_groups(text: str):
    """``"1,2,3;4,5"`` -> ``[(1, 2, 3), (4, 5)]``."""
    try:
        return [tuple(int(i) for i in g.split(",")) for g in text.split(";") if g.strip()]
    except ValueError:
        raise UsageError(f"cannot parse index groups {text!r}; expected e.g. 1,2,3;4,5") from None


def parse_floats(text: str):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse numbers {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drfeas", description="Douglas-Rachford schemes for convex feasibility problems")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run one algorithm on one problem")
    s.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", metavar="FILE", help="JSON problem file")
    src.add_argument("--generate", metavar="SPEC",
                     help="random instance, e.g. polytope:5x10:slack=0.3")
    s.add_argument("--strings", help="string plan for sa-dr, e.g. 1,2,3;4,5")
    s.add_argument("--blocks", help="block plan for bi-dr, e.g. 1,2,3;4,5")
    s.add_argument("--weights", help="comma list; for bi-dr one list per block separated by ;")
    s.add_argument("--x0", help="starting point as a comma list")
    s.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
    s.add_argument("--step-tol", type=float, default=1e-12)
    s.add_argument("--max-iters", type=int, default=100_000)
    s.add_argument("--trace-stride", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", metavar="FILE", help="CSV trace (metadata goes to FILE.meta.json)")

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compare", help="compare the iterates of two saved runs")
    c.add_argument("run_a")
    c.add_argument("run_b")
    c.add_argument("--tol", type=float, default=0.0)
    c.add_argument("--stride-a", type=int, default=1)
    c.add_argument("--stride-b", type=int, default=1)
    return parser


def _solve(args) -> int:
    if args.problem:
        problem = load_problem(args.problem)
    else:
        problem = generate(parse_instance_spec(args.generate, args.seed))
    m = problem.m
    if args.strings and args.algorithm != "sa-dr":
        raise UsageError("--strings only applies to --algorithm sa-dr")
    if args.blocks and args.algorithm != "bi-dr":
        raise UsageError("--blocks only applies to --algorithm bi-dr")
    if args.weights and args.algorithm in ("cyclic-dr", "pocs"):
        raise UsageError(f"--weights does not apply to {args.algorithm}")

    cfg = StopConfig(args.tol, args.step_tol, args.max_iters, args.trace_stride)
    x0 = parse_floats(args.x0) if args.x0 else default_start(problem, args.seed)
    everything = [tuple(range(1, m + 1))]

    if args.algorithm == "sa-dr":
        strings = parse_groups(args.strings) if args.strings else everything
        if args.weights:
            plan = alg.StringPlan(strings, parse_floats(args.weights))
        else:
            plan = alg.StringPlan.equal(strings)
        rec = alg.sa_dr(problem, plan, x0, cfg)
    elif args.algorithm == "bi-dr":
        blocks = parse_groups(args.blocks) if args.blocks else everything
        if args.weights:
            plan = alg.BlockPlan(blocks, [parse_floats(w) for w in args.weights.split(";")])
        else:
            plan = alg.BlockPlan.equal(blocks)
        rec = alg.bi_dr(problem, plan, x0, cfg)
    elif args.algorithm == "rset-dr":
        w = parse_floats(args.weights) if args.weights else [1.0 / (m - 1)] * (m - 1)
        rec = alg.r_set_dr_scheme(problem, w, x0, cfg)
    elif args.algorithm == "cyclic-dr":
        rec = alg.cyclic_dr(problem, x0, cfg)
    elif args.algorithm == "sdr":
        rec = alg.simultaneous_dr(
            problem, parse_floats(args.weights) if args.weights else None, x0, cfg)
    else:
        rec = alg.reference_cyclic_projections(problem, x0, cfg)

    if args.out:
        save_run(rec, args.out, seed=args.seed)
    x = np.array2string(rec.final, precision=6, separator=", ")
    print(f"{args.algorithm}: {rec.stop_reason} after {rec.iterations} iterations, "
          f"residual {rec.residuals[-1]:.3e}, x = {x}")
    return EXIT_BUDGET if rec.stop_reason == "max_iters" else EXIT_OK


def _verify(args) -> int:
    failed = 0
    for name, verdict in run_suite(args.suite, args.seed):
        status = "PASS" if verdict.passed else "FAIL"
        failed += not verdict.passed
        print(f"{status}  {name}  (metric {verdict.metric:.3e}, threshold {verdict.threshold:.1e})")
    return EXIT_ERROR if failed else EXIT_OK


def _compare(args) -> int:
    a, b = load_run(args.run_a), load_run(args.run_b)
    v = compare_trajectories(a, b, args.tol, args.stride_a, args.stride_b)
    print(f"{'PASS' if v.passed else 'FAIL'}  max deviation {v.metric:.3e} "
          f"(tolerance {v.threshold:.1e}, {v.detail})")
    return EXIT_OK if v.passed else EXIT_ERROR


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": _solve, "verify": _verify, "compare": _compare}[args.command]
    try:
        return handler(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"drfeas {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
