"""Transportation problem instances: the data model, validation, the text
format and the instance generators.

An instance is given by row weights ``a`` (supplies), column weights ``b``
(demands) and an integer profit matrix ``c``.  The problem is to find a
nonnegative flow matrix with row sums ``a`` and column sums ``b`` that
*maximizes* ``sum(c * f)``.

All quantities are 64-bit integers.  Callers with real-valued data must
scale and round beforehand; exact comparison of heights is what makes the
degenerate (many ties) regime well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

INT64_MAX = np.iinfo(np.int64).max

#: Largest size accepted by :func:`gen_worst_case`.  The weights overflow
#: int64 from n = 46 on; 42 leaves 2 bits of headroom for heights, which are
#: sums of profits along tree paths.
WORST_CASE_MAX_N = 42


def _frozen_int_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.int64, ndmin=ndim, copy=True)
    arr.flags.writeable = False
    return arr


class Instance:
    """An ``m x n`` transportation problem.

    The arrays are copied and frozen on construction, so an instance can be
    shared between threads and solves.  Construction does not check balance
    or signs; use :func:`validate` for that.
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        self.a = _frozen_int_array(a, 1)
        self.b = _frozen_int_array(b, 1)
        self.c = _frozen_int_array(c, 2)

    @property
    def m(self) -> int:
        return int(self.a.shape[0])

    @property
    def n(self) -> int:
        return int(self.b.shape[0])

    @property
    def total(self) -> int:
        return int(sum(int(x) for x in self.a))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
            and self.c.shape == other.c.shape
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self):
        return hash((self.a.tobytes(), self.b.tobytes(), self.c.shape, self.c.tobytes()))

    def __repr__(self) -> str:
        return f"Instance(m={self.m}, n={self.n}, total={self.total})"

    def cost(self, flows) -> int:
        """Objective value ``sum(c * flows)`` in exact integer arithmetic."""
        f = np.asarray(flows)
        rows, cols = np.nonzero(f)
        return sum(int(self.c[i, j]) * int(f[i, j]) for i, j in zip(rows, cols))


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def validate(inst: Instance) -> ValidationReport:
    """Check dimensions, nonnegative weights and balance of supply and demand."""
    report = ValidationReport()
    m, n = inst.a.shape[0], inst.b.shape[0]
    if m < 1 or n < 1:
        report.failures.append(f"dimension: need m, n >= 1 (got m={m}, n={n})")
    if inst.c.shape != (m, n):
        report.failures.append(f"dimension: c has shape {inst.c.shape}, expected {(m, n)}")
    neg_a = np.flatnonzero(inst.a < 0)
    if neg_a.size:
        report.failures.append(f"nonnegativity: a[{neg_a[0] + 1}] = {inst.a[neg_a[0]]} < 0")
    neg_b = np.flatnonzero(inst.b < 0)
    if neg_b.size:
        report.failures.append(f"nonnegativity: b[{neg_b[0] + 1}] = {inst.b[neg_b[0]]} < 0")
    sa = sum(int(x) for x in inst.a)
    sb = sum(int(x) for x in inst.b)
    if sa != sb:
        report.failures.append(f"balance: sum(a) = {sa} != sum(b) = {sb}")
    return report


# ---------------------------------------------------------------------------
# Text format


class InstanceFormatError(ValueError):
    """Raised by :func:`parse_instance`; ``kind`` names the failure class."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind}: {message}{where}")


def _int_tokens(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for tok in tokens:
        try:
            v = int(tok, 10)
        except ValueError:
            raise InstanceFormatError("non-integer token", repr(tok), lineno) from None
        if not -INT64_MAX - 1 <= v <= INT64_MAX:
            raise InstanceFormatError("out of range", f"{tok} does not fit in 64 bits", lineno)
        out.append(v)
    return out


def parse_instance(text: str) -> Instance:
    """Parse the whitespace-separated text format.

    Layout: ``m n`` on the first line, then the ``m`` supplies, the ``n``
    demands and ``m`` rows of ``n`` profits, one vector per line.  Blank
    lines and lines starting with ``#`` are skipped.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped.split()))

    if not lines:
        raise InstanceFormatError("missing header", "input has no data lines")
    lineno, header = lines[0]
    if len(header) != 2:
        raise InstanceFormatError("malformed header", f"expected 'm n', got {len(header)} tokens", lineno)
    m, n = _int_tokens(header, lineno)
    if m < 1 or n < 1:
        raise InstanceFormatError("malformed header", f"dimensions must be positive (m={m}, n={n})", lineno)

    expected = 3 + m
    if len(lines) != expected:
        raise InstanceFormatError(
            "wrong counts", f"expected {expected} data lines for m={m}, got {len(lines)}"
        )

    def row(k: int, width: int, what: str) -> list[int]:
        ln, toks = lines[k]
        if len(toks) != width:
            raise InstanceFormatError("wrong counts", f"{what}: expected {width} values, got {len(toks)}", ln)
        return _int_tokens(toks, ln)

    a = row(1, m, "supplies")
    b = row(2, n, "demands")
    c = [row(3 + i, n, f"profit row {i + 1}") for i in range(m)]

    for vec, what, ln in ((a, "a", lines[1][0]), (b, "b", lines[2][0])):
        for k, v in enumerate(vec):
            if v < 0:
                raise InstanceFormatError("negative weight", f"{what}[{k + 1}] = {v}", ln)
    if sum(a) != sum(b):
        raise InstanceFormatError("balance violation", f"sum(a) = {sum(a)} != sum(b) = {sum(b)}")
    return Instance(a, b, c)


def serialize_instance(inst: Instance, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{inst.m} {inst.n}")
    out.append(" ".join(str(int(x)) for x in inst.a))
    out.append(" ".join(str(int(x)) for x in inst.b))
    for i in range(inst.m):
        out.append(" ".join(str(int(x)) for x in inst.c[i]))
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst, comment))


# ---------------------------------------------------------------------------
# Generators


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the random model: weights uniform in ``[1, a_max]`` and
    ``[1, b_max]``, profits uniform in ``[1, c_max]``."""

    m: int
    n: int
    a_max: int
    b_max: int
    c_max: int
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.a_max < 1 or self.b_max < 1:
            raise ValueError("a_max and b_max must be positive")
        if self.m * self.a_max != self.n * self.b_max:
            raise ValueError(
                f"sampling intervals must satisfy m*a_max == n*b_max "
                f"({self.m}*{self.a_max} != {self.n}*{self.b_max})"
            )
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def c_star(self) -> Fraction:
        """Degeneracy ratio ``c_max / (m n)``; values well below 1 mean many ties."""
        return Fraction(self.c_max, self.m * self.n)

    @classmethod
    def benchmark(cls, m: int, n: int | None = None, degenerate: bool = False, seed: int = 0,
                  scale: int = 160000) -> "GeneratorConfig":
        """The benchmark protocol: ``a_max = scale // m`` (at least 2), ``b_max``
        matched, ``c_max = m n`` or 20 in the degenerate regime."""
        n = m if n is None else n
        a_max = max(scale // m, 2)
        if (m * a_max) % n:
            raise ValueError(f"cannot match b_max for m={m}, n={n}, a_max={a_max}")
        c_max = 20 if degenerate else m * n
        return cls(m, n, a_max, m * a_max // n, c_max, seed)


def _rebalance(a: np.ndarray, b: np.ndarray) -> None:
    """Add units round-robin to the deficient vector until the sums agree."""
    delta = int(a.sum()) - int(b.sum())
    target = b if delta > 0 else a
    delta = abs(delta)
    k = target.shape[0]
    target += delta // k
    target[: delta % k] += 1
    assert int(a.sum()) == int(b.sum())


def gen_random(cfg: GeneratorConfig) -> Instance:
    rng = np.random.default_rng(cfg.seed)
    a = rng.integers(1, cfg.a_max, size=cfg.m, endpoint=True, dtype=np.int64)
    b = rng.integers(1, cfg.b_max, size=cfg.n, endpoint=True, dtype=np.int64)
    c = rng.integers(1, cfg.c_max, size=(cfg.m, cfg.n), endpoint=True, dtype=np.int64)
    _rebalance(a, b)
    return Instance(a, b, c)


def gen_assignment(n: int, c_max: int, seed: int = 0) -> Instance:
    """Unit weights on both sides, so optimal flows form a permutation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if c_max < 1:
        raise ValueError("c_max must be >= 1")
    rng = np.random.default_rng(seed)
    c = rng.integers(1, c_max, size=(n, n), endpoint=True, dtype=np.int64)
    ones = np.ones(n, dtype=np.int64)
    return Instance(ones, ones, c)


def worst_case_weights(n: int) -> tuple[list[int], list[int]]:
    """Weights of the exponential instance: a1, b1, a2, b2, ... run through the
    Fibonacci numbers 1, 2, 3, 5, ..., except that the last demand repeats."""
    a = [1]
    b = [2]
    for _ in range(2, n):
        a.append(a[-1] + b[-1])
        b.append(b[-1] + a[-1])
    a.append(a[-1] + b[-1])
    b.append(b[-1])
    return a, b


def worst_case_profits(n: int) -> list[list[int]]:
    n2 = n * n
    c = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            base = (n + 1 - i) * (n + 1 - j)
            if i == j:
                row.append(base - n2 * (2**i + 2**j))
            elif i < j:
                row.append(base - n2 * 2**j)
            else:
                row.append(base - n2 * 2**i)
        c.append(row)
    return c


def gen_worst_case(n: int) -> Instance:
    """The ``n x n`` instance on which the solver takes ``3 * 2**(n-1) - 2`` cycles.

    Only defined for ``n >= 2``: for ``n = 1`` the recurrences give two
    conflicting values of ``a1``.
    """
    if n < 2:
        raise ValueError("worst-case instance needs n >= 2")
    if n > WORST_CASE_MAX_N:
        raise ValueError(f"n = {n} exceeds the 64-bit cap of {WORST_CASE_MAX_N}")
    a, b = worst_case_weights(n)
    return Instance(a, b, worst_case_profits(n))
