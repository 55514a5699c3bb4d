"""Print the refined and binomial cycle bounds, and the diagonal against the
exponential instance.

    python scripts/bounds_table.py --max 10
    python scripts/bounds_table.py --max 12 --diagonal-only
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from tpsolver.bounds import Z_PRIME_MAX, format_table, z_inf, z_prime_sup, z_sup


@dataclass
class Config:
    max: int = 10
    diagonal_only: bool = False


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max", type=int, default=10)
    p.add_argument("--diagonal-only", action="store_true")
    cfg = Config(**vars(p.parse_args(argv)))
    if not 1 <= cfg.max <= Z_PRIME_MAX:
        p.error(f"--max must be between 1 and {Z_PRIME_MAX}")

    sizes = range(1, cfg.max + 1)
    if not cfg.diagonal_only:
        print("refined bound")
        print(format_table(sizes, sizes))
        print("binomial bound")
        print(format_table(sizes, sizes, z_sup))
    print(f"{'n':>3} {'refined':>9} {'lower':>9} {'seconds':>8}")
    for n in sizes:
        t0 = time.perf_counter()
        zp = z_prime_sup(n, n)
        print(f"{n:>3} {zp:>9} {z_inf(n):>9} {time.perf_counter() - t0:>8.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
