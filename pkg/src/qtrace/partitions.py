"""Set partitions and the non-crossing classes behind the Weingarten calculus.

Partitions are stored canonically (blocks sorted by their minimum, elements
ascending), so equal partitions compare and hash equal and enumeration order
is reproducible.  Elements are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from .errors import CapExceeded, InvalidInput

HARD_CAP = 12


class PartitionClass(enum.Enum):
    ALL = "all"
    NC = "nc"
    NC2 = "nc2"
    NC_EVEN = "nc_even"


@total_ordering
@dataclass(frozen=True)
class SetPartition:
    """Ordered by size, then lexicographically by restricted growth string."""

    n: int
    blocks: tuple[tuple[int, ...], ...]
    _rgs: tuple[int, ...] = field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        seen = sorted(x for b in self.blocks for x in b)
        if self.n < 1 or seen != list(range(1, self.n + 1)):
            raise InvalidInput(f"blocks {self.blocks!r} do not partition 1..{self.n}")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        if canon != self.blocks:
            raise InvalidInput(f"blocks {self.blocks!r} are not in canonical order")
        labels = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                labels[x - 1] = k
        object.__setattr__(self, "_rgs", tuple(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "SetPartition":
        bl = [tuple(sorted(int(x) for x in b)) for b in blocks]
        if any(len(b) == 0 for b in bl):
            raise InvalidInput("empty block")
        if n is None:
            n = max((b[-1] for b in bl), default=0)
        return cls(n, tuple(sorted(bl)))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SetPartition":
        """Partition whose blocks are the positions sharing a label."""
        groups: dict[int, list[int]] = {}
        for pos, lab in enumerate(labels, start=1):
            groups.setdefault(lab, []).append(pos)
        return cls(len(labels), tuple(sorted(tuple(g) for g in groups.values())))

    @property
    def labels(self) -> tuple[int, ...]:
        """Block index of each element (restricted growth string)."""
        return self._rgs

    def __lt__(self, other: "SetPartition") -> bool:
        if not isinstance(other, SetPartition):
            return NotImplemented
        return (self.n, self._rgs) < (other.n, other._rgs)

    def __len__(self) -> int:
        return len(self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def block_count(p: SetPartition) -> int:
    return len(p.blocks)


def kernel(indices: Sequence[int]) -> SetPartition:
    """ker(i): positions carrying equal values share a block."""
    if len(indices) == 0:
        raise InvalidInput("kernel of an empty index list")
    return SetPartition.from_labels(list(indices))


def _check_same_size(p: SetPartition, q: SetPartition) -> None:
    if p.n != q.n:
        raise InvalidInput(f"partitions of different sizes ({p.n} vs {q.n})")


def leq(p: SetPartition, q: SetPartition) -> bool:
    """True iff p refines q."""
    _check_same_size(p, q)
    image: dict[int, int] = {}
    for a, b in zip(p.labels, q.labels):
        if image.setdefault(a, b) != b:
            return False
    return True


def join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Least common coarsening: merge blocks of p and q sharing a point."""
    _check_same_size(p, q)
    parent = list(range(p.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        for b in part.blocks:
            r = find(b[0] - 1)
            for x in b[1:]:
                s = find(x - 1)
                if s != r:
                    parent[s] = r
    return SetPartition.from_labels([find(x) for x in range(p.n)])


def meet(p: SetPartition, q: SetPartition) -> SetPartition:
    _check_same_size(p, q)
    return SetPartition.from_labels(list(zip(p.labels, q.labels)))


def is_noncrossing(p: SetPartition) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another."""
    lab = p.labels
    n = p.n
    for a in range(n):
        for b in range(a + 1, n):
            if lab[b] == lab[a]:
                continue
            for c in range(b + 1, n):
                if lab[c] != lab[a]:
                    continue
                for d in range(c + 1, n):
                    if lab[d] == lab[b]:
                        return False
    return True


def belongs_to(p: SetPartition, kind: PartitionClass) -> bool:
    if kind is PartitionClass.ALL:
        return True
    if not is_noncrossing(p):
        return False
    if kind is PartitionClass.NC2:
        return all(len(b) == 2 for b in p.blocks)
    if kind is PartitionClass.NC_EVEN:
        return all(len(b) % 2 == 0 for b in p.blocks)
    return True


def _size_ok(kind: PartitionClass, size: int) -> bool:
    if kind is PartitionClass.NC2:
        return size == 2
    if kind is PartitionClass.NC_EVEN:
        return size % 2 == 0
    return True


@lru_cache(maxsize=None)
def _nc_patterns(m: int, kind: PartitionClass) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Non-crossing partitions of 0..m-1 (blocks unsorted, any order)."""
    if m == 0:
        return ((),)
    out: list[tuple[tuple[int, ...], ...]] = []

    def shifted(pats, off):
        return [tuple(tuple(x + off for x in b) for b in pat) for pat in pats]

    # block of element 0 is {0 = s0 < s1 < ... < sk}; the gaps between
    # consecutive members and the tail after sk are partitioned independently
    def extend(block: tuple[int, ...], start: int):
        if _size_ok(kind, len(block)):
            for tail in shifted(_nc_patterns(m - start, kind), start):
                yield (block,) + tail
        if kind is PartitionClass.NC2 and len(block) >= 2:
            return
        for j in range(start, m):
            gaps = shifted(_nc_patterns(j - start, kind), start)
            if not gaps:
                continue
            rest = list(extend(block + (j,), j + 1))
            for g in gaps:
                for r in rest:
                    yield g + r

    out.extend(extend((0,), 1))
    return tuple(out)


def _all_rgs(n: int):
    labels = [0] * n

    def rec(pos: int, maxlab: int):
        if pos == n:
            yield tuple(labels)
            return
        for lab in range(maxlab + 2):
            labels[pos] = lab
            yield from rec(pos + 1, max(maxlab, lab))

    labels[0] = 0
    if n == 1:
        yield (0,)
        return
    yield from rec(1, 0)


@lru_cache(maxsize=64)
def _enumerate_cached(kind: PartitionClass, n: int) -> tuple[SetPartition, ...]:
    if kind is PartitionClass.ALL:
        parts = [SetPartition.from_labels(r) for r in _all_rgs(n)]
    else:
        parts = [
            SetPartition(n, tuple(sorted(tuple(x + 1 for x in sorted(b)) for b in pat)))
            for pat in _nc_patterns(n, kind)
        ]
    parts.sort()
    return tuple(parts)


def enumerate_partitions(kind: PartitionClass, n: int, cap: int = HARD_CAP) -> list[SetPartition]:
    """Every partition of {1..n} in the class, sorted by restricted growth string."""
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the partition cap {cap}")
    return list(_enumerate_cached(PartitionClass(kind), n))


def discrete(n: int) -> SetPartition:
    return SetPartition(n, tuple((i,) for i in range(1, n + 1)))


def full(n: int) -> SetPartition:
    return SetPartition(n, (tuple(range(1, n + 1)),))


def parse_partition(data: Sequence[Sequence[int]]) -> SetPartition:
    """Inverse of :meth:`SetPartition.to_json`."""
    return SetPartition.from_blocks(data)


def catalan(k: int) -> int:
    c = 1
    for i in range(k):
        c = c * 2 * (2 * i + 1) // (i + 2)
    return c
