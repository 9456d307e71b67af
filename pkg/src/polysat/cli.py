"""Command-line front end: solve, generate, sweep.

Output protocol for solve (solver-competition style):

    s SATISFIABLE        exit code 10
    v 1 -2 3 0           positive literal = variable True (DIMACS signs)

    s UNKNOWN            exit code 0
    o 3                  fewest violated constraints found

The v-line maps the internal -1=True encoding back to DIMACS convention,
where a positive printed literal means the variable is assigned True.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .benchgen import Family, gen_random_card, gen_random_kcnf, gen_random_kxor, ratio_floor
from .hnf import parse_hnf, serialize_hnf
from .model import Formula, InputError, count_violations
from .objectives import Formulation
from .optimizers import OptimizerConfig, OptimizerKind
from .solver import SolveConfig, SolveResult, SolveStatus, solve
from .sweep import SweepSpec, aggregate_sweep, run_sweep, write_text

__all__ = ["main", "emit_result"]

EXIT_SAT = 10
EXIT_UNKNOWN = 0
EXIT_ERROR = 1


def emit_result(result: SolveResult) -> tuple[str, int]:
    """Render a solve result as protocol text plus its process exit code."""
    if result.status is SolveStatus.SAT:
        lits = " ".join(
            str(i + 1) if value == -1 else str(-(i + 1))
            for i, value in enumerate(result.assignment)
        )
        body = f"v {lits} 0" if lits else "v 0"
        return f"s SATISFIABLE\n{body}", EXIT_SAT
    return f"s UNKNOWN\no {result.violated}", EXIT_UNKNOWN


def _self_check(formula: Formula, v_line: str) -> None:
    """Re-read the v-line as text and recount violations discretely."""
    tokens = v_line.split()
    assert tokens[0] == "v" and tokens[-1] == "0"
    assignment = np.ones(formula.num_vars, dtype=np.int64)
    for token in tokens[1:-1]:
        lit = int(token)
        assignment[abs(lit) - 1] = -1 if lit > 0 else 1
    if count_violations(formula, assignment) != 0:
        raise RuntimeError("self-check failed: emitted assignment does not verify")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as handle:
        return handle.read()


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--formulation", choices=[f.value for f in Formulation], default="square"
    )
    p.add_argument("--alpha", type=float, default=0.0, help="penalty coefficient")
    p.add_argument(
        "--optimizer", choices=[k.value for k in OptimizerKind], default="adam"
    )
    p.add_argument("--step-size", type=float, default=1e-3)
    p.add_argument("--max-iters", type=int, default=10_000, help="per restart")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=300.0, metavar="SECS")
    p.add_argument(
        "--tolerance", type=float, default=1e-8, help="objective-is-zero tolerance"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysat",
        description="hybrid SAT/MaxSAT solving by multilinear polynomial minimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an HNF file")
    p_solve.add_argument("file", help="HNF path, or - for stdin")
    _add_solver_flags(p_solve)
    p_solve.add_argument(
        "--self-check",
        action="store_true",
        help="re-parse the emitted v-line and re-verify discretely",
    )

    p_gen = sub.add_parser("generate", help="write a random HNF instance")
    p_gen.add_argument("--family", choices=[f.value for f in Family], required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--ratio", type=float, help="m/n for cnf3/xor2")
    p_gen.add_argument("--m", type=int, help="explicit constraint count for cnf3/xor2")
    p_gen.add_argument("--r-p", type=float, help="card: constraints per variable")
    p_gen.add_argument("--r-v", type=float, help="card: constraint width per variable")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", default="-", help="path, or - for stdout")

    p_sweep = sub.add_parser("sweep", help="run a benchmark x config grid into CSV")
    p_sweep.add_argument("--family", choices=[f.value for f in Family], required=True)
    p_sweep.add_argument("--n", type=int, required=True)
    p_sweep.add_argument("--ratios", help="comma-separated m/n grid (cnf3/xor2)")
    p_sweep.add_argument("--r-p", help="comma-separated r_P grid (card)")
    p_sweep.add_argument("--r-v", help="comma-separated r_V grid (card)")
    p_sweep.add_argument("--count", type=int, default=1, help="instances per grid point")
    p_sweep.add_argument("--formulations", default="square")
    p_sweep.add_argument("--alphas", default="0")
    p_sweep.add_argument("--optimizers", default="adam")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--timeout", type=float, default=300.0, metavar="SECS")
    p_sweep.add_argument("--restarts", type=int, default=32)
    p_sweep.add_argument("--step-size", type=float, default=1e-3)
    p_sweep.add_argument("--max-iters", type=int, default=10_000)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument(
        "--no-timing",
        action="store_true",
        help="write wall_ms as 0 for byte-reproducible CSVs",
    )
    p_sweep.add_argument("--out", required=True, help="data CSV path")
    p_sweep.add_argument("--aggregate-out", help="solved-fraction CSV path")
    return parser


def _cmd_solve(args) -> int:
    formula = parse_hnf(_read_text(args.file))
    cfg = SolveConfig(
        formulation=Formulation(args.formulation),
        alpha=args.alpha,
        optimizer=OptimizerConfig(
            kind=OptimizerKind(args.optimizer),
            step_size=args.step_size,
            max_iters=args.max_iters,
            value_tol=args.tolerance,
        ),
        restarts=args.restarts,
        seed=args.seed,
        timeout=args.timeout,
    )
    result = solve(formula, cfg)
    text, code = emit_result(result)
    print(text)
    if args.self_check and result.status is SolveStatus.SAT:
        _self_check(formula, text.splitlines()[1])
        print("c self-check ok")
    return code


def _cmd_generate(args) -> int:
    family = Family(args.family)
    if family is Family.CARD:
        if args.r_p is None or args.r_v is None:
            raise InputError("card generation needs --r-p and --r-v")
        formula = gen_random_card(args.n, args.r_p, args.r_v, args.seed)
        comment = f"card n={args.n} r_p={args.r_p} r_v={args.r_v} seed={args.seed}"
    else:
        if args.m is not None:
            m = args.m
        elif args.ratio is not None:
            m = ratio_floor(args.ratio * args.n)
        else:
            raise InputError(f"{family.value} generation needs --ratio or --m")
        gen = gen_random_kcnf if family is Family.CNF3 else gen_random_kxor
        k = 3 if family is Family.CNF3 else 2
        formula = gen(args.n, m, k, args.seed)
        comment = f"{family.value} n={args.n} m={m} seed={args.seed}"
    text = serialize_hnf(formula, comment=comment)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as handle:
            handle.write(text)
    return 0


def _parse_grid(text: str | None, cast) -> tuple:
    if not text:
        return ()
    return tuple(cast(part) for part in text.split(",") if part.strip())


def _cmd_sweep(args) -> int:
    spec = SweepSpec(
        family=Family(args.family),
        n=args.n,
        ratios=_parse_grid(args.ratios, float),
        r_p_values=_parse_grid(args.r_p, float),
        r_v_values=_parse_grid(args.r_v, float),
        count=args.count,
        formulations=tuple(Formulation(f) for f in _parse_grid(args.formulations, str)),
        alphas=_parse_grid(args.alphas, float),
        optimizers=tuple(OptimizerKind(o) for o in _parse_grid(args.optimizers, str)),
        seed=args.seed,
        timeout=args.timeout,
        restarts=args.restarts,
        step_size=args.step_size,
        max_iters=args.max_iters,
        threads=args.threads,
        measure_time=not args.no_timing,
    )
    data = run_sweep(spec)
    write_text(args.out, data)
    if args.aggregate_out:
        write_text(args.aggregate_out, aggregate_sweep(data))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_sweep(args)
    except (InputError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
