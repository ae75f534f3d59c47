"""Command-line entry point.

Subcommands: gen, oracle, exponents, solve, verify, bench.
Exit codes: 0 success, 1 usage error, 3 budget exhaustion,
2 invariant-suite failure (verify only).  Rationals on the command line
are integers or "p/q" tokens; eta defaults to 1/2 and delta to 1/10.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import log2
from pathlib import Path

from .exponents import (classical_exponent_case1, classical_exponent_case2,
                        mcdiarmid_gamma, quantum_comparison)
from .formats import (format_rational, gen_planted_csp, gen_random_csp,
                      gen_random_lin2, parse_instance, parse_rational,
                      sat_clause_family, parity_family, write_instance)
from .instances import Assignment, CspInstance, Lin2Instance, compute_stats
from .oracle import (DegenerateInstanceError, OracleCapExceeded,
                     brute_force_minimum, threshold_set_count)
from .sampling import RngStream
from .solvers import (RankedBudgetError, bounded_sweep_solve, ranked_solve,
                      solve_case1, solve_case2)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _rational(token: str) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _load(path: str):
    return parse_instance(Path(path).read_text())


def build_parser() -> _Parser:
    parser = _Parser(prog="spx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--family", choices=["lin2", "csp", "planted-csp", "parity-csp"],
                   default="lin2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", type=_rational, nargs="*", default=None,
                   help='constraint weights to draw from (default "1")')
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p = sub.add_parser("oracle", help="exact optimum and threshold counts")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--eta", type=_rational, default=Fraction(1, 2))

    p = sub.add_parser("exponents", help="exponent report")
    p.add_argument("--in", dest="path", help="instance file (bounded-influence report)")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--eta", type=_rational, default=Fraction(1, 2))
    p.add_argument("--gamma", type=float, default=1.0,
                   help="threshold exponent (sign-structured report)")

    p = sub.add_parser("solve", help="run one solver")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--mode", choices=["case1", "case2", "ranked", "sweep"],
                   required=True)
    p.add_argument("--eta", type=_rational, default=Fraction(1, 2))
    p.add_argument("--delta", type=_rational, default=Fraction(1, 10))
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--h-min", type=_rational, default=None,
                   help="known optimum (default: computed by the oracle)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=10 ** 7)

    p = sub.add_parser("verify", help="run the aggregated invariant suite")
    p.add_argument("--scale", choices=["small", "medium"], default="small")

    p = sub.add_parser("bench", help="sweep n, emit CSV/JSON report + figures")
    p.add_argument("--n", type=int, nargs="+", default=[10, 12, 14])
    p.add_argument("--seeds", type=int, default=5, help="seeds 0..S-1 per n")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--density", type=int, default=2, help="m = density * n")
    p.add_argument("--eta", type=_rational, default=Fraction(1, 2))
    p.add_argument("--budget", type=int, default=10 ** 7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", default="bench-out")
    return parser


def _cmd_gen(args) -> int:
    weights = tuple(args.weights) if args.weights else (Fraction(1),)
    if args.family == "lin2":
        inst = gen_random_lin2(args.n, args.k, args.m, (-1, 1), args.seed)
    elif args.family == "csp":
        inst = gen_random_csp(args.n, args.k, args.m, sat_clause_family(args.k),
                              args.seed, weight_choices=weights)
    elif args.family == "parity-csp":
        inst = gen_random_csp(args.n, args.k, args.m, parity_family(args.k),
                              args.seed, weight_choices=weights)
    else:
        planted = Assignment.all_plus(args.n)
        inst = gen_planted_csp(args.n, args.k, args.m, sat_clause_family(args.k),
                               planted, args.seed, weight_choices=weights)
    text = write_instance(inst)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = _load(args.path)
    res = brute_force_minimum(inst)
    print(f"h_min = {format_rational(res.h_min)}")
    print(f"minimizers = {res.minimizer_count}")
    if res.h_min < 0:
        count = threshold_set_count(inst, res.h_min, args.eta)
        print(f"|T_eta| = {count}  (eta = {format_rational(args.eta)})")
        if isinstance(inst, CspInstance):
            stats = compute_stats(inst)
            gamma = mcdiarmid_gamma(stats, res.h_min, args.eta)
            rhs = (1 - gamma) * inst.n
            print(f"gamma_eta = {gamma:.6f}; bound log2|T| <= {rhs:.6f} "
                  f"(measured {log2(count):.6f})")
    else:
        print("optimum is not negative; threshold set undefined")
    return EXIT_OK


def _cmd_exponents(args) -> int:
    if args.path:
        inst = _load(args.path)
        if isinstance(inst, Lin2Instance):
            print("instance report requires a CSP file; use --k/--eta/--gamma "
                  "for the sign-structured calculator", file=sys.stderr)
            return EXIT_USAGE
        res = brute_force_minimum(inst)
        if res.h_min >= 0:
            print("degenerate instance: optimum is not negative", file=sys.stderr)
            return EXIT_USAGE
        stats = compute_stats(inst)
        report = classical_exponent_case2(stats, res.h_min, args.eta)
        delta = float(abs(res.h_min) / inst.m) if inst.unit_weighted else None
        quantum_comparison(report, args.k, delta=delta,
                           irregularity=float(stats.irregularity))
    else:
        report = classical_exponent_case1(args.gamma, args.eta, args.k)
        quantum_comparison(report, args.k)
    for key, value in report.to_dict().items():
        print(f"{key} = {value}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = _load(args.path)
    rng = RngStream(args.seed)
    try:
        if args.mode in ("case1", "case2"):
            h_min = args.h_min
            if h_min is None:
                h_min = brute_force_minimum(inst).h_min
            solver = solve_case1 if args.mode == "case1" else solve_case2
            out = solver(inst, h_min, args.eta, rng, budget=args.budget)
        elif args.mode == "ranked":
            out = ranked_solve(inst, args.eta, args.gamma, args.delta, rng,
                               slack=args.slack, budget=args.budget)
        else:
            out, _trace = bounded_sweep_solve(inst, args.eta, args.delta, rng,
                                              slack=args.slack,
                                              budget=args.budget)
    except (RankedBudgetError,) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DegenerateInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out.best is None:
        print("no assignment found within budget", file=sys.stderr)
        return EXIT_BUDGET
    print(f"value = {format_rational(out.value)}")
    print(f"assignment = {''.join('1' if s < 0 else '0' for s in out.best.signs)}")
    print(f"certified = {out.certified_optimal}")
    print(f"iterations = {out.iterations}, raw_draws = {out.raw_draws}, "
          f"ball_points = {out.ball_points}")
    if not out.certified_optimal and args.mode in ("case1", "case2"):
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verify
    return run_verify(args.scale)


def _cmd_bench(args) -> int:
    from .bench import RunConfig, bench_sweep, write_report
    config = RunConfig(family="lin2", k=args.k, density=args.density,
                       n_values=tuple(args.n), seeds=tuple(range(args.seeds)),
                       eta=args.eta, budget=args.budget, workers=args.workers,
                       out_dir=args.out)
    report = bench_sweep(config)
    paths = write_report(report, args.out, figures=not args.no_figures)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    slope = report["summary"]["log2_draws_slope"]
    if slope is not None:
        print(f"log2(draws)/n regression slope = {slope:.4f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "gen": _cmd_gen, "oracle": _cmd_oracle, "exponents": _cmd_exponents,
        "solve": _cmd_solve, "verify": _cmd_verify, "bench": _cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
