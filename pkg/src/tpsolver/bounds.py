"""Bounds on the number of cycles.

A tree's *signature* is its sequence of level populations ``(g1, g2, ...)``
below the root.  Signatures are ordered by ``g1`` decreasing, then ``g2``
increasing, then ``g3`` decreasing and so on (missing levels count as 0).
Every cycle moves both the moving and the fixed tree strictly later in this
order, which gives:

* ``z_sup(m, n) = C(m + n, m) - 1``, the number of moving-tree signatures;
* ``z_prime_sup(m, n)``, the longest chain of signature pairs that rises in
  both orders and respects the row/column counts shared by the two trees;
* ``z_inf(n) = 3 * 2**(n-1) - 2``, reached by the exponential instance.
"""

from __future__ import annotations

import functools
import math

import numba
import numpy as np

#: :func:`z_prime_sup` enumerates every signature pair; beyond this size the
#: pair count exceeds ~10^7.
Z_PRIME_MAX = 12


def compare_signatures(s1, s2) -> int:
    """-1 if ``s1`` sorts before ``s2``, 1 if after, 0 if equal."""
    for level in range(max(len(s1), len(s2))):
        x = s1[level] if level < len(s1) else 0
        y = s2[level] if level < len(s2) else 0
        if x != y:
            if level % 2 == 0:  # odd level (1-based): decreasing
                return -1 if x > y else 1
            return -1 if x < y else 1
    return 0


def signature_later(old, new) -> bool:
    """True if ``new`` sorts strictly after ``old``."""
    return compare_signatures(old, new) < 0


def signature_key(sig, length: int) -> tuple[int, ...]:
    """Ascending sort key equivalent to :func:`compare_signatures`."""
    padded = list(sig) + [0] * (length - len(sig))
    return tuple(-x if k % 2 == 0 else x for k, x in enumerate(padded))


def signatures(ones: int, zeros: int) -> list[tuple[int, ...]]:
    """All signatures with ``ones`` nodes on odd levels and ``zeros`` on even
    levels.

    Equivalently: binary words with ``ones`` ones and ``zeros`` zeros that
    start with a 1, read as run lengths.  There are ``C(ones+zeros-1, zeros)``.
    """
    if ones < 1:
        return []
    out: list[tuple[int, ...]] = []

    def grow(prefix: tuple[int, ...], left: int, other: int) -> None:
        # prefix ends with a run of the current kind; ``left`` of that kind
        # remain, ``other`` of the alternate kind
        if left == 0 and other == 0:
            out.append(prefix)
            return
        if other:
            for run in range(1, other + 1):
                grow(prefix + (run,), other - run, left)

    for first in range(1, ones + 1):
        grow((first,), ones - first, zeros)
    return out


def z_sup(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return math.comb(m + n, m) - 1


def z_inf(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return 3 * 2 ** (n - 1) - 2


@functools.lru_cache(maxsize=4)
def _ranked(limit: int) -> dict[tuple[int, int], np.ndarray]:
    """Global ranks of all signatures with up to ``limit`` ones and zeros,
    grouped by ``(ones, zeros)``.  Only relative order matters downstream."""
    groups = {(o, z): signatures(o, z) for o in range(1, limit + 1) for z in range(limit + 1)}
    length = 2 * limit + 1
    keys = []
    for sigs in groups.values():
        block = np.zeros((len(sigs), length), dtype=np.int64)
        for r, sig in enumerate(sigs):
            block[r, : len(sig)] = sig
        keys.append(block)
    key = np.concatenate(keys)
    key[:, 0::2] *= -1  # odd levels sort decreasing
    order = np.lexsort(key.T[::-1])
    rank = np.empty(len(key), dtype=np.int64)
    rank[order] = np.arange(len(key))
    out = {}
    start = 0
    for k, sigs in groups.items():
        out[k] = rank[start : start + len(sigs)]
        start += len(sigs)
    return out


@numba.njit(cache=True)
def _strict_lis(seq):
    tails = np.empty(seq.shape[0], dtype=np.int64)
    size = 0
    for v in seq:
        lo, hi = 0, size
        while lo < hi:  # leftmost tail >= v, so equal values never extend
            mid = (lo + hi) // 2
            if tails[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        pos = lo
        tails[pos] = v
        if pos == size:
            size += 1
    return size


def longest_strict_chain(k1, k2) -> int:
    """Longest chain of points strictly increasing in both coordinates.

    Sorting by ``k1`` ascending and ``k2`` descending within ties reduces it
    to a strictly increasing subsequence of ``k2``.
    """
    k1 = np.asarray(k1, dtype=np.int64)
    k2 = np.asarray(k2, dtype=np.int64)
    if k1.size == 0:
        return 0
    span = int(k2.max()) + 1
    order = np.argsort(k1 * span - k2, kind="stable")
    return int(_strict_lis(k2[order]))


def feasible_points(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank pairs ``(K, K')`` of every state before termination: the moving
    tree has ``p >= 1`` rows and ``q <= n - 1`` columns, the fixed tree the
    complementary ``n - q >= 1`` columns and ``m - p`` rows."""
    ranks = _ranked(max(m, n, 10))
    ks, kps = [], []
    for p in range(1, m + 1):
        for q in range(0, n):
            mov = ranks[(p, q)]
            fix = ranks[(n - q, m - p)]
            ks.append(np.repeat(mov, fix.size))
            kps.append(np.tile(fix, mov.size))
    return np.concatenate(ks), np.concatenate(kps)


def z_prime_sup(m: int, n: int) -> int:
    """Length of the longest doubly increasing chain of feasible states.

    Each cycle leaves a feasible state for a strictly later one, and the
    last cycle leaves the feasible set, so the chain length itself (not
    length - 1) bounds the cycle count.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if max(m, n) > Z_PRIME_MAX:
        raise ValueError(f"z_prime_sup is enumerated only up to {Z_PRIME_MAX}")
    k, kp = feasible_points(m, n)
    return longest_strict_chain(k, kp)


def table(ms, ns, fn=z_prime_sup) -> list[list[int]]:
    return [[fn(m, n) for n in ns] for m in ms]


def format_table(ms, ns, fn=z_prime_sup) -> str:
    rows = table(ms, ns, fn)
    width = max(5, max(len(str(v)) for r in rows for v in r) + 1)
    head = "m\\n".rjust(4) + "".join(str(n).rjust(width) for n in ns)
    lines = [head]
    for m, r in zip(ms, rows):
        lines.append(str(m).rjust(4) + "".join(str(v).rjust(width) for v in r))
    return "\n".join(lines) + "\n"
