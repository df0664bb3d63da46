"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 task left unsolved,
3 internal invariant violated.
"""
from __future__ import annotations

import argparse
import os
import sys
from itertools import groupby

from . import bench
from .costs import (
    DEFAULT_DELTA,
    DEFAULT_RHO,
    integer_model,
    load_probabilities,
    real_model,
)
from .engines import ALGORITHMS, batches, make_enumerator
from .errors import BestFirstError, InvariantViolation, MonotonicityViolation
from .grammar import (
    SeededRandom,
    Uniform,
    fig1,
    load_grammar,
    make_family,
    save_grammar,
    validate,
)
from .pbe import bundled_tasks, load_tasks, solve
from .terms import render

BUILTIN_GRAMMARS = {"fig1": fig1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(1)


def parse_ks(text: str) -> list[int]:
    """``4``, ``4,16``, ``4..16`` (inclusive) or ``4..16:4`` (with a step)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                hi, _, step = hi.partition(":")
                out.extend(range(int(lo), int(hi) + 1, int(step or 1)))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad --k value {text!r}") from None
    return out


def parse_algos(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}; expected one of {', '.join(ALGORITHMS)}")
    return algos


def _print_config(cfg: dict) -> None:
    for k, v in cfg.items():
        print(f"# {k}: {v}", file=sys.stderr)


def _grammar_from_args(args):
    if args.grammar:
        path = args.grammar
        if not os.path.exists(path) and path in BUILTIN_GRAMMARS:
            return BUILTIN_GRAMMARS[path](), f"builtin:{path}"
        with open(path) as f:
            return load_grammar(f.read()), path
    if args.family:
        ks = parse_ks(args.k or "4")
        if len(ks) != 1:
            raise UsageError("this command takes a single --k")
        costs = Uniform() if getattr(args, "uniform", False) else SeededRandom(seed=args.seed)
        return make_family(args.family, ks[0], costs), f"{args.family.upper()}_{ks[0]}"
    raise UsageError("give --grammar PATH or --family {D,N,R} --k INT")


def _model_from_args(g, args):
    probs = getattr(args, "probs", None)
    if probs:
        with open(probs) as f:
            return load_probabilities(f.read(), g, args.delta)
    mode = args.cost_mode
    if mode is None:
        integral = all(float(r.cost).is_integer() for r in g.rules)
        mode = "int" if integral else "real"
    if mode == "real":
        return real_model(g, args.rho)
    try:
        return integer_model(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _resolve_algo(args) -> str:
    algo = args.algo
    if args.no_bucketing and algo == "eco":
        algo = "eco-nobucket"
    return algo


def cmd_enumerate(args) -> int:
    g, source = _grammar_from_args(args)
    m = _model_from_args(g, args)
    algo = _resolve_algo(args)
    e = make_enumerator(algo, g, m, args.bucket_size)
    _print_config({
        "command": "enumerate", "grammar": source, "algorithm": algo,
        "cost_mode": m.describe(), "bucket_size": getattr(e, "bucket_size", None),
        "count": args.count, "canonical": args.canonical, "seed": args.seed,
    })
    rows: list[tuple[int, str]] = []
    for cost, progs in batches(e):
        if len(rows) >= args.count and (not args.canonical or cost > rows[-1][0]):
            break
        for p in progs:
            rows.append((cost, render(p, g)))
        if len(rows) >= args.count and not args.canonical:
            break
    if args.canonical:
        rows = [r for _, level in groupby(rows, key=lambda r: r[0]) for r in sorted(level)]
    for cost, text in rows[: args.count]:
        print(f"{m.display(cost)}\t{text}")
    return 0


def cmd_solve(args) -> int:
    tasks = load_tasks(args.task) if args.task else bundled_tasks()
    algo = _resolve_algo(args)
    _print_config({
        "command": "solve", "tasks": args.task or "bundled", "algorithm": algo,
        "max_programs": args.count, "timeout": args.timeout,
        "delta": args.delta if args.delta is not None else "dsl default",
        "bucket_size": args.bucket_size,
    })
    unsolved = 0
    for t in tasks:
        r = solve(t, algo, max_programs=args.count, max_seconds=args.timeout,
                  delta=args.delta, bucket_size=args.bucket_size)
        s = r.stats
        if r.solved:
            prog = render(r.program, r.grammar)
            cost = r.model.display(r.cost)
            status = "solved"
        else:
            prog, cost, status = "-", "-", "unsolved"
            unsolved += 1
        print(f"{t.name}\t{status}\t{cost}\t{prog}\tenumerated={s.enumerated}"
              f"\tpruned={s.pruned}\tseconds={s.seconds:.3f}")
    return 2 if unsolved else 0


def _bench_config(args, **extra) -> bench.BenchConfig:
    if not args.family:
        raise UsageError("benchmarks need --family {D,N,R}")
    seeds = list(range(args.seed, args.seed + args.seeds))
    return bench.BenchConfig(
        family=args.family.upper(), ks=parse_ks(args.k or "4"), algorithms=parse_algos(args.algos),
        seeds=seeds, bucket_size=args.bucket_size, cost_mode=args.cost_mode or "int",
        rho=args.rho, jobs=args.jobs, **extra,
    )


def _emit_csv(rows, path) -> None:
    if path:
        with open(path, "w", newline="") as f:
            bench.write_csv(rows, f)
    else:
        bench.write_csv(rows, sys.stdout)


def cmd_bench_throughput(args) -> int:
    cfg = _bench_config(args, duration=args.duration)
    _print_config({"command": "bench-throughput", **vars(cfg)})
    rows = [r for s in bench.run_throughput(cfg) for r in s.rows()]
    _emit_csv(rows, args.csv)
    return 0


def cmd_bench_scaling(args) -> int:
    cfg = _bench_config(args, target=args.target, timeout=args.timeout or 300.0)
    _print_config({"command": "bench-scaling", **vars(cfg)})
    rows = [r for s in bench.run_scaling(cfg) for r in s.rows()]
    _emit_csv(rows, args.csv)
    return 0


def cmd_bench_delay(args) -> int:
    g, source = _grammar_from_args(args)
    m = _model_from_args(g, args)
    algos = parse_algos(args.algos)
    _print_config({
        "command": "bench-delay", "grammar": source, "algorithms": algos,
        "programs": args.count, "block": bench.BLOCK, "cost_mode": m.describe(),
        "bucket_size": args.bucket_size, "seed": args.seed,
    })
    family = args.family.upper() if args.family and not args.grammar else source
    k = parse_ks(args.k)[0] if args.k and not args.grammar else ""
    rows = []
    for a in algos:
        rep = bench.measure_delay(g, m, a, args.count, bucket_size=args.bucket_size)
        rows += bench.delay_rows(rep, family, k, args.seed, m.describe())
        print(f"# {a}: last/first block queue ops = {rep.ratio:.4f}", file=sys.stderr)
    _emit_csv(rows, args.csv)
    return 0


def cmd_gen_grammar(args) -> int:
    g, source = _grammar_from_args(args)
    _print_config({"command": "gen-grammar", "grammar": source, "seed": args.seed,
                   "costs": "uniform" if args.uniform else "seeded 1..100"})
    print(save_grammar(g), end="")
    return 0


def cmd_validate(args) -> int:
    if not args.grammar:
        raise UsageError("validate needs --grammar PATH")
    with open(args.grammar) as f:
        g = load_grammar(f.read(), validate_grammar=False)
    _print_config({"command": "validate", "grammar": args.grammar})
    problems = validate(g)
    for v in problems:
        print(f"error: {v.kind}: {v.message}", file=sys.stderr)
    if problems:
        return 1
    print(f"ok: {len(g.nonterminals)} non-terminals, {len(g.rules)} rules")
    return 0


def cmd_plot_data(args) -> int:
    import csv

    with open(args.csv) as f:
        rows = list(csv.DictReader(f))
    print(bench.gnuplot_data(rows, args.metric), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grammar", metavar="PATH")
    common.add_argument("--family", choices=["D", "N", "R", "d", "n", "r"])
    common.add_argument("--k", metavar="INT[..INT]")
    common.add_argument("--algo", default="eco", choices=ALGORITHMS)
    common.add_argument("--algos", default=",".join(ALGORITHMS), metavar="LIST")
    common.add_argument("--cost-mode", choices=["int", "real"])
    common.add_argument("--probs", metavar="PATH", help="rule probabilities, discretized with --delta")
    common.add_argument("--delta", type=float, default=None)
    common.add_argument("--rho", type=float, default=DEFAULT_RHO)
    common.add_argument("--bucket-size", type=int)
    common.add_argument("--no-bucketing", action="store_true")
    common.add_argument("--count", type=int)
    common.add_argument("--duration", type=float, default=60.0)
    common.add_argument("--target", type=int, default=1_000_000)
    common.add_argument("--seeds", type=int, default=5)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--task", metavar="PATH")
    common.add_argument("--timeout", type=float)
    common.add_argument("--canonical", action="store_true")
    common.add_argument("--csv", metavar="PATH")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--uniform", action="store_true", help="unit costs for --family")
    common.add_argument("--metric", default="programs")

    p = _Parser(prog="bestfirst", description="Best-first enumeration of weighted grammars.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn, helptext in [
        ("enumerate", cmd_enumerate, "print programs in cost order"),
        ("solve", cmd_solve, "solve programming-by-example tasks"),
        ("bench-throughput", cmd_bench_throughput, "programs per second-tick, CSV"),
        ("bench-scaling", cmd_bench_scaling, "time to a target count, CSV"),
        ("bench-delay", cmd_bench_delay, "per-block delay profile, CSV"),
        ("gen-grammar", cmd_gen_grammar, "print a D/N/R family grammar"),
        ("validate", cmd_validate, "check a grammar file"),
        ("plot-data", cmd_plot_data, "gnuplot data from a benchmark CSV"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=fn)
    return p


_COUNT_DEFAULTS = {"enumerate": 10, "bench-delay": 1_000_000}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.count is None:
        args.count = _COUNT_DEFAULTS.get(args.command)
    if args.delta is None and args.probs:
        args.delta = DEFAULT_DELTA
    try:
        return args.func(args)
    except (InvariantViolation, MonotonicityViolation) as exc:
        print(f"invariant: {exc}", file=sys.stderr)
        return 3
    except (UsageError, BestFirstError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
