"""Observed cycle counts on random instances next to the exponential worst case.

    python scripts/cycle_statistics.py --sizes 5 10 15 20 25 30 50 100 --reps 100
    python scripts/cycle_statistics.py --csv stats.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from tpsolver.bounds import z_inf
from tpsolver.cli import bench


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [5, 10, 15, 20, 25, 30, 50, 100])
    reps: int = 100
    seed: int = 0
    mode: str = "per-row"
    descent: str = "b"
    degenerate: bool = False
    jobs: int = 1
    csv: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = bench(cfg.sizes, cfg.reps, seed=cfg.seed, degenerate=cfg.degenerate,
                 mode=cfg.mode, descent=cfg.descent, jobs=cfg.jobs)
    out = []
    for r in rows:
        out.append({
            "n": r.n,
            "worst_case": z_inf(r.n) if r.n <= 60 else "",
            "cycles_mean": round(r.cycles_mean, 2),
            "cycles_rms": round(r.cycles_rms, 2),
            "cycles_per_n": round(r.cycles_mean / r.n, 3),
            "solve_s": r.time_mean,
            "setup_s": r.setup_mean,
        })
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="per-row")
    p.add_argument("--descent", default="b")
    p.add_argument("--degenerate", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", default=None)
    cfg = Config(**vars(p.parse_args(argv)))

    rows = run(cfg)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    print(f"{'n':>5} {'worst case':>18} {'observed':>16} {'per n':>7} {'solve s':>10}")
    for r in rows:
        obs = f"{r['cycles_mean']:.1f} +- {r['cycles_rms']:.1f}"
        print(f"{r['n']:>5} {str(r['worst_case']):>18} {obs:>16} {r['cycles_per_n']:>7} {r['solve_s']:>10.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
