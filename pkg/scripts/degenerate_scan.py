"""Shuffled early-exit scan against the full scan when profits take few values.

For each size, solves the same instances with both descents and reports
cycles, the share of the matrix examined per descent, and solve time.

    python scripts/degenerate_scan.py --sizes 100 200 500 --reps 3
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from tpsolver.instance import GeneratorConfig, gen_random
from tpsolver.solver import SolveOptions, solve


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [50, 100, 200, 500])
    reps: int = 3
    c_max: int = 20
    seed: int = 0
    csv: str | None = None


def run(cfg: Config) -> list[dict]:
    out = []
    for k, n in enumerate(cfg.sizes):
        seeds = np.random.SeedSequence([cfg.seed, k]).generate_state(cfg.reps, dtype=np.uint64)
        for descent in ("naive", "a"):
            cyc, frac, sec = [], [], []
            for s in seeds:
                base = GeneratorConfig.benchmark(n, seed=int(s))
                inst = gen_random(GeneratorConfig(n, n, base.a_max, base.b_max, cfg.c_max, int(s)))
                rep = solve(inst, SolveOptions(mode="single", descent=descent))
                cyc.append(rep.cycles)
                frac.append(rep.examined / rep.cycles / (n * n))
                sec.append(rep.elapsed)
            out.append({"n": n, "descent": descent, "cycles": float(np.mean(cyc)),
                        "scanned": float(np.mean(frac)), "solve_s": float(np.mean(sec))})
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--c-max", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    cfg = Config(**vars(p.parse_args(argv)))

    rows = run(cfg)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    print(f"{'n':>5} {'descent':>8} {'cycles':>10} {'scanned':>9} {'solve s':>9}")
    for r in rows:
        print(f"{r['n']:>5} {r['descent']:>8} {r['cycles']:>10.1f} {r['scanned']:>9.2%} {r['solve_s']:>9.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
