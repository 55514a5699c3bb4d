"""Command-line front end.

    tpsolver solve    FILE [--mode ...] [--descent ...] [--flows] [--duals] [--json]
    tpsolver trace    FILE [--c-sup N] [-o OUT]
    tpsolver verify   FILE [--mode ...] [--descent ...]
    tpsolver generate {random,assignment,worst-case} ...
    tpsolver bounds   [--m LO HI] [--n LO HI] [--kind {z-prime,z-sup}]
    tpsolver bench    [--sizes N ...] [--reps N] [--degenerate] ...

Exit codes are listed in :data:`EXIT_CODES`.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .bounds import Z_PRIME_MAX, format_table, z_prime_sup, z_sup
from .instance import (
    GeneratorConfig,
    Instance,
    InstanceFormatError,
    gen_assignment,
    gen_random,
    gen_worst_case,
    read_instance,
    serialize_instance,
)
from .oracle import DEFAULT_MAX_CELLS, oracle_solve
from .solver import SolveOptions, SolverError, format_trace, solve, verify_optimality

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_CERTIFICATE = 5
EXIT_DISAGREE = 6

EXIT_CODES = {
    EXIT_OK: "success (certified optimum where a solution is produced)",
    EXIT_FAILURE: "solver error or invalid arguments to a generator",
    EXIT_USAGE: "command-line usage error",
    EXIT_IO: "file could not be read or written",
    EXIT_PARSE: "instance file is malformed",
    EXIT_CERTIFICATE: "solution failed the optimality certificate",
    EXIT_DISAGREE: "solver and oracle disagree",
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str) -> Instance:
    try:
        return read_instance(path)
    except InstanceFormatError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from exc
    except OSError as exc:
        raise CliError(EXIT_IO, f"{path}: {exc.strerror or exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"{out}: {exc.strerror or exc}") from exc


def _options(args, **extra) -> SolveOptions:
    try:
        return SolveOptions(mode=args.mode, descent=args.descent, c_sup=args.c_sup, **extra)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


def _solve(inst: Instance, opts: SolveOptions):
    """Solve and certify; map failures onto exit codes."""
    try:
        report = solve(inst, opts, certify=False)
    except ValueError as exc:
        raise CliError(EXIT_FAILURE, str(exc)) from exc
    except (SolverError, RuntimeError) as exc:
        raise CliError(EXIT_FAILURE, f"solver failed: {exc}") from exc
    report.certificate = verify_optimality(inst, report.flows, report.alpha, report.beta)
    if not report.certificate:
        raise CliError(EXIT_CERTIFICATE, f"certification failed: {report.certificate}")
    return report


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    inst = _load(args.file)
    opts = _options(args, verify_each_cycle=args.verify_each_cycle)
    report = _solve(inst, opts)
    if args.json:
        doc = {
            "m": inst.m,
            "n": inst.n,
            "mode": opts.mode.value,
            "descent": opts.descent.value,
            "cost": report.cost,
            "cycles": report.cycles,
            "elapsed": report.elapsed,
            "certified": True,
            "flows": [[i, j, f] for i, j, f in report.triplets()],
        }
        if args.duals:
            doc["alpha"] = report.alpha.tolist()
            doc["beta"] = report.beta.tolist()
        print(json.dumps(doc))
        return EXIT_OK
    print(f"cost {report.cost}")
    print(f"cycles {report.cycles}")
    print(f"elapsed {report.elapsed:.6f}")
    print("certified")
    if args.flows:
        for i, j, f in report.triplets():
            print(f"flow {i} {j} {f}")
    if args.duals:
        print("alpha " + " ".join(map(str, report.alpha.tolist())))
        print("beta " + " ".join(map(str, report.beta.tolist())))
    return EXIT_OK


def cmd_trace(args) -> int:
    inst = _load(args.file)
    opts = SolveOptions(mode="single", descent="naive", c_sup=args.c_sup, trace=True)
    report = _solve(inst, opts)
    _emit(format_trace(report.trace), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.file)
    report = _solve(inst, _options(args))
    try:
        ref = oracle_solve(inst, max_cells=args.max_cells)
    except ValueError as exc:
        raise CliError(EXIT_FAILURE, f"oracle: {exc}") from exc
    agree = ref.cost == report.cost
    if args.json:
        print(json.dumps({"solver_cost": report.cost, "oracle_cost": ref.cost, "agree": agree}))
    else:
        print(f"solver {report.cost}")
        print(f"oracle {ref.cost}")
        print("agree" if agree else "DISAGREE")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_generate(args) -> int:
    try:
        if args.kind == "random":
            m = args.m
            n = args.n if args.n is not None else m
            if args.a_max is None:
                cfg = GeneratorConfig.benchmark(m, n, degenerate=args.degenerate, seed=args.seed)
                if args.c_max is not None:
                    cfg = GeneratorConfig(cfg.m, cfg.n, cfg.a_max, cfg.b_max, args.c_max, args.seed)
            else:
                if (m * args.a_max) % n:
                    raise ValueError("m * a_max must be divisible by n")
                c_max = args.c_max if args.c_max is not None else (20 if args.degenerate else m * n)
                cfg = GeneratorConfig(m, n, args.a_max, m * args.a_max // n, c_max, args.seed)
            inst = gen_random(cfg)
            note = f"random m={m} n={n} a_max={cfg.a_max} c_max={cfg.c_max} seed={args.seed}"
        elif args.kind == "assignment":
            c_max = args.c_max if args.c_max is not None else args.m * args.m
            inst = gen_assignment(args.m, c_max, seed=args.seed)
            note = f"assignment n={args.m} c_max={c_max} seed={args.seed}"
        else:
            inst = gen_worst_case(args.m)
            note = f"worst-case n={args.m}"
    except ValueError as exc:
        raise CliError(EXIT_FAILURE, str(exc)) from exc
    _emit(serialize_instance(inst, comment=note), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    ms = range(args.m[0], args.m[1] + 1)
    ns = range(args.n[0], args.n[1] + 1)
    if min(ms.start, ns.start) < 1 or not ms or not ns:
        raise CliError(EXIT_USAGE, "ranges must be non-empty and start at 1 or more")
    fn = z_prime_sup if args.kind == "z-prime" else z_sup
    if fn is z_prime_sup and max(ms[-1], ns[-1]) > Z_PRIME_MAX:
        raise CliError(EXIT_FAILURE, f"z-prime is enumerated only up to {Z_PRIME_MAX}")
    if args.json:
        print(json.dumps({"kind": args.kind, "m": list(ms), "n": list(ns),
                          "values": [[fn(m, n) for n in ns] for m in ms]}))
    else:
        sys.stdout.write(format_table(ms, ns, fn))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


@dataclass
class BenchRow:
    n: int
    mode: str
    descent: str
    degenerate: bool
    reps: int
    cycles_mean: float
    cycles_rms: float
    time_mean: float
    time_rms: float
    setup_mean: float


def _bench_one(job):
    n, seed, degenerate, mode, descent = job
    t0 = time.perf_counter()
    inst = gen_random(GeneratorConfig.benchmark(n, degenerate=degenerate, seed=seed))
    setup = time.perf_counter() - t0
    report = solve(inst, SolveOptions(mode=mode, descent=descent))
    return report.cycles, report.elapsed, setup


def bench(sizes, reps: int, seed: int = 0, degenerate: bool = False, mode: str = "per-row",
          descent: str = "b", jobs: int = 1) -> list[BenchRow]:
    """Solve ``reps`` random instances per size and summarize cycles and times.

    Per-rep seeds come from ``SeedSequence(seed)`` so the report does not
    depend on ``jobs``.  Solve time excludes instance generation, which is
    reported separately as setup time.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    SolveOptions(mode=mode, descent=descent)  # reject bad combinations early
    rows = []
    for k, n in enumerate(sizes):
        seeds = np.random.SeedSequence([seed, k]).generate_state(reps, dtype=np.uint64)
        work = [(n, int(s), degenerate, mode, descent) for s in seeds]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_bench_one, work))
        else:
            results = [_bench_one(w) for w in work]
        cyc = np.array([r[0] for r in results], dtype=float)
        sec = np.array([r[1] for r in results])
        setup = np.array([r[2] for r in results])
        rows.append(BenchRow(n, mode, descent, degenerate, reps, float(cyc.mean()), float(cyc.std()),
                             float(sec.mean()), float(sec.std()), float(setup.mean())))
    return rows


def cmd_bench(args) -> int:
    try:
        rows = bench(args.sizes, args.reps, seed=args.seed, degenerate=args.degenerate,
                     mode=args.mode, descent=args.descent, jobs=args.jobs)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    if args.json:
        print(json.dumps({"seed": args.seed, "rows": [asdict(r) for r in rows]}))
        return EXIT_OK
    print(f"# mode={args.mode} descent={args.descent} degenerate={args.degenerate} "
          f"reps={args.reps} seed={args.seed}")
    print(f"{'n':>5} {'cycles':>10} {'rms':>8} {'solve_s':>11} {'rms_s':>11} {'setup_s':>11}")
    for r in rows:
        print(f"{r.n:>5} {r.cycles_mean:>10.2f} {r.cycles_rms:>8.2f} {r.time_mean:>11.6f} "
              f"{r.time_rms:>11.6f} {r.setup_mean:>11.6f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_solver_flags(p, mode="single", descent="naive"):
    p.add_argument("--mode", choices=["single", "per-row"], default=mode)
    p.add_argument("--descent", choices=["naive", "a", "b"], default=descent)
    p.add_argument("--c-sup", type=int, default=None, help="height of the upper stop (default max c + 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpsolver", description="Transportation problem solver.")
    parser.add_argument("--version", action="version", version=f"tpsolver {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--flows", action="store_true", help="print nonzero flows")
    p.add_argument("--duals", action="store_true", help="print row and column heights")
    p.add_argument("--verify-each-cycle", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="per-cycle trace (single stop, naive descent)")
    p.add_argument("file")
    p.add_argument("--c-sup", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="compare against the reference solver")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a generated instance")
    p.add_argument("kind", choices=["random", "assignment", "worst-case"])
    p.add_argument("--m", type=int, required=True, help="rows (size n for assignment and worst-case)")
    p.add_argument("--n", type=int, default=None, help="columns (random only; default m)")
    p.add_argument("--a-max", type=int, default=None)
    p.add_argument("--c-max", type=int, default=None)
    p.add_argument("--degenerate", action="store_true", help="profits in [1, 20]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bounds", help="print a grid of cycle-count bounds")
    p.add_argument("--m", type=int, nargs=2, default=[1, 10], metavar=("LO", "HI"))
    p.add_argument("--n", type=int, nargs=2, default=[1, 10], metavar=("LO", "HI"))
    p.add_argument("--kind", choices=["z-prime", "z-sup"], default="z-prime")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bench", help="cycle and timing statistics on random instances")
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degenerate", action="store_true")
    _add_solver_flags(p, mode="per-row", descent="b")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tpsolver: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
