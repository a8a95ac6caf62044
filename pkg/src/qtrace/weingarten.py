"""Gram and Weingarten matrices and exact Haar moments for O_N^+, S_N^+, H_N^+.

The Haar moment of u_{i1 j1} ... u_{in jn} is

    sum over pi, sigma in the family's partition class of
        delta_pi(i) delta_sigma(j) W(pi, sigma),

with W the inverse of the Gram matrix G(pi, sigma) = N^{b(pi v sigma)}.
The moment depends on the indices only through ker(i) and ker(j), so
everything here is keyed by kernel partitions.

W is held as an integer matrix over a single common denominator; kernel sums
are then plain integer slice sums.
"""

from __future__ import annotations

import enum
import json
import math
import os
import tempfile
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import exact
from .errors import CapExceeded, InvalidInput, SingularGram
from .partitions import (
    HARD_CAP,
    PartitionClass,
    SetPartition,
    block_count,
    enumerate_partitions,
    kernel,
    leq,
    parse_partition,
)

FORMAT_VERSION = 1


class QGFamily(enum.Enum):
    OPLUS = "oplus"
    SPLUS = "splus"
    HPLUS = "hplus"

    @property
    def partition_class(self) -> PartitionClass:
        return _CLASS[self]

    @property
    def min_N(self) -> int:
        return _MIN_N[self]

    @classmethod
    def parse(cls, x: "QGFamily | str") -> "QGFamily":
        if isinstance(x, cls):
            return x
        try:
            return cls(str(x).lower())
        except ValueError:
            raise InvalidInput(f"unknown family {x!r}; expected one of oplus, splus, hplus") from None


_CLASS = {
    QGFamily.OPLUS: PartitionClass.NC2,
    QGFamily.SPLUS: PartitionClass.NC,
    QGFamily.HPLUS: PartitionClass.NC_EVEN,
}
_MIN_N = {QGFamily.OPLUS: 2, QGFamily.SPLUS: 4, QGFamily.HPLUS: 4}


@dataclass
class EngineLimits:
    """Size caps on the number of legs n, per family.

    O+ and H+ default to 12 legs because evaluating central functionals on
    six-leg words appends characters of up to six further legs.
    """

    caps: dict = field(
        default_factory=lambda: {QGFamily.OPLUS: 12, QGFamily.SPLUS: 7, QGFamily.HPLUS: 12}
    )
    extended_caps: dict = field(default_factory=lambda: {QGFamily.SPLUS: 8})
    extended: bool = False
    # matrices up to this size are inverted by the pure-Python Bareiss routine
    bareiss_max_dim: int = 64
    # larger contexts are kept in memory only; their JSON would run to tens of MB
    cache_max_dim: int = 500

    def cap(self, family: QGFamily) -> int:
        c = self.caps[family]
        if self.extended:
            c = max(c, self.extended_caps.get(family, c))
        return min(c, HARD_CAP)


LIMITS = EngineLimits()


@contextmanager
def extended_tier(enabled: bool = True) -> Iterator[None]:
    old = LIMITS.extended
    LIMITS.extended = enabled
    try:
        yield
    finally:
        LIMITS.extended = old


def _check_family_N(family: QGFamily, N: int) -> None:
    if not isinstance(N, int) or isinstance(N, bool):
        raise InvalidInput(f"N must be an integer, got {N!r}")
    if N < family.min_N:
        raise InvalidInput(f"N={N} is below the minimum {family.min_N} for {family.value}")


def _check_n(family: QGFamily, n: int) -> None:
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    cap = LIMITS.cap(family)
    if n > cap:
        hint = " (try the extended tier)" if n <= LIMITS.extended_caps.get(family, 0) else ""
        raise CapExceeded(f"{family.value}: {n} legs exceeds the cap {cap}{hint}")


def falling_factorial(N: int, b: int) -> int:
    """N (N-1) ... (N-b+1): the number of injective labellings of b blocks."""
    if b < 0:
        raise InvalidInput(f"b must be non-negative, got {b}")
    if b > N:
        raise InvalidInput(f"b={b} exceeds N={N}")
    return math.perm(N, b)


@lru_cache(maxsize=32)
def join_block_counts(kind: PartitionClass, n: int) -> np.ndarray:
    """Matrix of b(pi v sigma) over the class, independent of N."""
    parts = enumerate_partitions(kind, n, cap=HARD_CAP)
    m = len(parts)
    out = np.empty((m, m), dtype=np.int16)
    if m == 0:
        return out
    labels = np.array([p.labels for p in parts], dtype=np.int16)
    for a, p in enumerate(parts):
        s = labels.copy()
        # merge, in every row at once, the labels met by each block of p
        for blk in p.blocks:
            if len(blk) < 2:
                continue
            cols = [x - 1 for x in blk]
            target = s[:, cols].min(axis=1)[:, None]
            for c in cols:
                old = s[:, c][:, None]
                s = np.where(s == old, target, s)
        s.sort(axis=1)
        out[a] = 1 + (np.diff(s, axis=1) != 0).sum(axis=1)
    out.setflags(write=False)
    return out


def _invert(gram: list[list[int]], family: QGFamily, n: int, N: int) -> tuple[np.ndarray, int]:
    """Exact inverse as (integer numerators, positive common denominator)."""
    m = len(gram)
    if m <= LIMITS.bareiss_max_dim:
        try:
            adj, det = exact.bareiss_inverse(gram)
        except ZeroDivisionError:
            raise SingularGram(family.value, n, N) from None
        flat = [x for r in adj for x in r]
    else:
        import flint

        try:
            num, den = flint.fmpz_mat(gram).inv().numer_denom()
        except ZeroDivisionError:
            raise SingularGram(family.value, n, N) from None
        flat = [int(x) for x in num.entries()]
        det = int(den)
    g = math.gcd(det, *flat)
    if det < 0:
        g = -g
    flat = [x // g for x in flat]
    den = det // g
    return _as_array(flat, m), den


def _as_array(flat: list[int], m: int) -> np.ndarray:
    """int64 when every slice sum provably fits, Python ints otherwise."""
    bits = max((abs(x).bit_length() for x in flat), default=0)
    if bits + 2 * max(m, 1).bit_length() < 62:
        arr = np.array(flat, dtype=np.int64)
    else:
        arr = np.empty(len(flat), dtype=object)
        arr[:] = flat
    return arr.reshape(m, m)


@dataclass(frozen=True)
class WeingartenContext:
    family: QGFamily
    n: int
    N: int
    partitions: tuple[SetPartition, ...]
    w_num: np.ndarray = field(repr=False, compare=False)
    w_den: int = field(compare=False)
    _index: dict = field(default_factory=dict, repr=False, compare=False)
    _refiners: dict = field(default_factory=dict, repr=False, compare=False)
    _colsums: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._index.update({p: k for k, p in enumerate(self.partitions)})

    @property
    def size(self) -> int:
        return len(self.partitions)

    def gram_exponents(self) -> np.ndarray:
        return join_block_counts(self.family.partition_class, self.n)

    @property
    def gram(self) -> list[list[int]]:
        N = self.N
        return [[N ** int(b) for b in row] for row in self.gram_exponents()]

    @property
    def weingarten(self) -> list[list[Fraction]]:
        d = self.w_den
        return [[Fraction(int(x), d) for x in row] for row in self.w_num]

    def entry(self, pi: SetPartition, sigma: SetPartition) -> Fraction:
        return Fraction(int(self.w_num[self._index[pi], self._index[sigma]]), self.w_den)

    def check_inverse(self) -> bool:
        """G W = I, by exact integer multiplication."""
        if self.size == 0:
            return True
        import flint

        g = flint.fmpz_mat(self.gram)
        w = flint.fmpz_mat([[int(x) for x in row] for row in self.w_num])
        prod = g * w
        d = self.w_den
        m = self.size
        return all(prod[i, j] == (d if i == j else 0) for i in range(m) for j in range(m))

    def refiners(self, p: SetPartition) -> np.ndarray:
        """Positions of the class partitions that refine p."""
        r = self._refiners.get(p)
        if r is None:
            if p.n != self.n:
                raise InvalidInput(f"kernel of size {p.n} used with a context of size {self.n}")
            r = np.array([k for k, pi in enumerate(self.partitions) if leq(pi, p)], dtype=np.intp)
            self._refiners[p] = r
        return r

    def kernel_sum(self, p: SetPartition, q: SetPartition) -> Fraction:
        """Sum of W(pi, sigma) over pi <= p, sigma <= q."""
        rp = self.refiners(p)
        rq = self.refiners(q)
        if rp.size == 0 or rq.size == 0:
            return Fraction(0)
        cs = self._colsums.get(q)
        if cs is None:
            cs = self.w_num[:, rq].sum(axis=1)
            self._colsums[q] = cs
        return Fraction(int(cs[rp].sum()), self.w_den)

    def to_json(self) -> dict:
        fmt = exact.format_rational
        d = self.w_den
        return {
            "format_version": FORMAT_VERSION,
            "family": self.family.value,
            "n": self.n,
            "N": self.N,
            "partitions": [p.to_json() for p in self.partitions],
            "gram": [[str(x) for x in row] for row in self.gram],
            "weingarten": [[fmt(Fraction(int(x), d)) for x in row] for row in self.w_num],
        }


# ---------------------------------------------------------------- caching

_MEMO: dict[tuple[QGFamily, int, int], WeingartenContext] = {}
_MEMO_LOCK = threading.Lock()


def cache_dir() -> Path:
    return Path(os.environ.get("QTRACE_CACHE", "./.qtrace-cache"))


def _cache_path(family: QGFamily, n: int, N: int) -> Path:
    return cache_dir() / f"wg_{family.value}_{n}_{N}.json"


def cache_put(ctx: WeingartenContext) -> Path | None:
    """Write atomically; returns None when the write was skipped or failed."""
    if ctx.size > LIMITS.cache_max_dim:
        return None
    path = _cache_path(ctx.family, ctx.n, ctx.N)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(ctx.to_json(), fh, separators=(",", ":"))
        os.replace(tmp, path)
    except OSError:
        return None
    return path


def cache_get(family: QGFamily | str, n: int, N: int) -> WeingartenContext | None:
    """Load and validate a stored context; anything unexpected counts as a miss."""
    family = QGFamily.parse(family)
    path = _cache_path(family, n, N)
    try:
        with open(path) as fh:
            data = json.load(fh)
        return _from_json(data, family, n, N)
    except (OSError, ValueError, TypeError, KeyError, ZeroDivisionError, InvalidInput):
        return None


def _from_json(data: dict, family: QGFamily, n: int, N: int) -> WeingartenContext | None:
    if data.get("format_version") != FORMAT_VERSION:
        return None
    if (data["family"], data["n"], data["N"]) != (family.value, n, N):
        return None
    parts = tuple(parse_partition(b) for b in data["partitions"])
    if parts != tuple(enumerate_partitions(family.partition_class, n)):
        return None
    m = len(parts)
    gram = data["gram"]
    expo = join_block_counts(family.partition_class, n)
    if len(gram) != m or any(
        len(row) != m or any(int(x) != N ** int(b) for x, b in zip(row, erow)) for row, erow in zip(gram, expo)
    ):
        return None
    w = [[exact.parse_rational(x) for x in row] for row in data["weingarten"]]
    if len(w) != m or any(len(row) != m for row in w):
        return None
    den = math.lcm(1, *(x.denominator for row in w for x in row))
    flat = [int(x * den) for row in w for x in row]
    ctx = WeingartenContext(family, n, N, parts, _as_array(flat, m), den)
    return ctx if ctx.check_inverse() else None


def clear_memory_cache() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


def build_context(family: QGFamily | str, n: int, N: int) -> WeingartenContext:
    """Compute from scratch (no cache lookup)."""
    family = QGFamily.parse(family)
    _check_family_N(family, N)
    _check_n(family, n)
    parts = tuple(enumerate_partitions(family.partition_class, n))
    expo = join_block_counts(family.partition_class, n)
    gram = [[N ** int(b) for b in row] for row in expo]
    if not parts:
        return WeingartenContext(family, n, N, parts, np.zeros((0, 0), dtype=np.int64), 1)
    num, den = _invert(gram, family, n, N)
    ctx = WeingartenContext(family, n, N, parts, num, den)
    if not ctx.check_inverse():
        raise ArithmeticError(f"inverse check failed for {family.value}, n={n}, N={N}")
    return ctx


def get_context(family: QGFamily | str, n: int, N: int) -> WeingartenContext:
    """Memory cache, then disk cache, then build (and store)."""
    family = QGFamily.parse(family)
    _check_family_N(family, N)
    _check_n(family, n)
    key = (family, n, N)
    ctx = _MEMO.get(key)
    if ctx is not None:
        return ctx
    ctx = cache_get(family, n, N)
    if ctx is None:
        ctx = build_context(family, n, N)
        cache_put(ctx)
    with _MEMO_LOCK:
        return _MEMO.setdefault(key, ctx)


# ---------------------------------------------------------------- public ops


def gram(family: QGFamily | str, n: int, N: int) -> list[list[int]]:
    family = QGFamily.parse(family)
    _check_family_N(family, N)
    _check_n(family, n)
    return [[N ** int(b) for b in row] for row in join_block_counts(family.partition_class, n)]


def weingarten(family: QGFamily | str, n: int, N: int) -> list[list[Fraction]]:
    return get_context(family, n, N).weingarten


def _has_refiner(kind: PartitionClass, p: SetPartition) -> bool:
    # a class partition below p exists iff each block of p can be split into
    # class blocks: always for NC, even sizes for NC2 / NC_EVEN
    if kind in (PartitionClass.NC2, PartitionClass.NC_EVEN):
        return all(len(b) % 2 == 0 for b in p.blocks)
    return True


def moment_by_kernel(family: QGFamily | str, N: int, p: SetPartition, q: SetPartition) -> Fraction:
    """h(p, q): the moment of any index pair with row kernel p and column kernel q."""
    family = QGFamily.parse(family)
    _check_family_N(family, N)
    if p.n != q.n:
        raise InvalidInput(f"kernels of different sizes ({p.n} vs {q.n})")
    if block_count(p) > N or block_count(q) > N:
        raise InvalidInput(f"a kernel with more than N={N} blocks has no admissible indices")
    kind = family.partition_class
    if not (_has_refiner(kind, p) and _has_refiner(kind, q)):
        return Fraction(0)
    return get_context(family, p.n, N).kernel_sum(p, q)


def moment(family: QGFamily | str, N: int, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """h(u_{i1 j1} ... u_{in jn}) for the family's fundamental generators."""
    family = QGFamily.parse(family)
    _check_family_N(family, N)
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise InvalidInput(f"rows and cols differ in length ({len(rows)} vs {len(cols)})")
    for x in rows + cols:
        if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= N:
            raise InvalidInput(f"index {x!r} outside 1..{N}")
    if not rows:
        return Fraction(1)
    _check_n(family, len(rows))
    return moment_by_kernel(family, N, kernel(rows), kernel(cols))
