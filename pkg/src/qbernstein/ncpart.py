"""Set partitions and the lattice NC(n) of non-crossing partitions.

Partitions are immutable and canonically ordered (blocks sorted by their
minimum, elements ascending), so they hash and compare structurally and can
be used as dictionary keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ArgumentError, SizeLimitError

DEFAULT_LIMIT = 14

Blocks = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class SetPartition:
    n: int
    blocks: Blocks

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError("ground set must be nonempty")
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.n + 1)):
            raise ArgumentError(f"blocks {self.blocks} do not partition 1..{self.n}")
        if any(not b for b in self.blocks):
            raise ArgumentError("empty block")
        canon = _canonical(self.blocks)
        if canon != self.blocks:
            object.__setattr__(self, "blocks", canon)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], n: int | None = None):
        blocks = tuple(tuple(b) for b in blocks)
        if n is None:
            n = max((max(b) for b in blocks if b), default=0)
        return cls(n, blocks)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"

    def labels(self) -> tuple[int, ...]:
        """Block label of each element 1..n (labels follow block order)."""
        lab = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                lab[x - 1] = k
        return tuple(lab)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


class NCPartition(SetPartition):
    """A set partition with no crossing pair of blocks."""

    def __post_init__(self):
        super().__post_init__()
        if not is_noncrossing(self):
            raise ArgumentError(f"{self} is crossing")


def _canonical(blocks) -> Blocks:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _fast(cls, n: int, blocks: Blocks):
    # Trusted constructor for internally generated, already canonical blocks.
    obj = object.__new__(cls)
    object.__setattr__(obj, "n", n)
    object.__setattr__(obj, "blocks", blocks)
    return obj


def _arcs_cross(blocks: Sequence[Sequence[int]]) -> bool:
    arcs = []
    for b in blocks:
        arcs.extend(zip(b, b[1:]))
    for x1, y1 in arcs:
        for x2, y2 in arcs:
            if x1 < x2 < y1 < y2:
                return True
    return False


def is_noncrossing(p: SetPartition) -> bool:
    """True iff no blocks B, C hold a < b < c < d with a, c in B and b, d in C.

    Two blocks cross exactly when an arc between consecutive elements of one
    crosses such an arc of the other, so only those arcs are compared.
    """
    return not _arcs_cross(p.blocks)


def zero(n: int) -> NCPartition:
    """The all-singletons partition 0_n."""
    return _fast(NCPartition, n, tuple((k,) for k in range(1, n + 1)))


def one(n: int) -> NCPartition:
    """The one-block partition 1_n."""
    return _fast(NCPartition, n, (tuple(range(1, n + 1)),))


def as_nc(p: SetPartition) -> NCPartition:
    if isinstance(p, NCPartition):
        return p
    return NCPartition(p.n, p.blocks)


@lru_cache(maxsize=None)
def _nc_shapes(m: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Non-crossing partitions of 0..m-1 as block lists (not yet sorted)."""
    if m == 0:
        return ((),)
    out = []
    rest = list(range(1, m))
    # The block of 0 is {0} plus a subset of 1..m-1; its gaps are independent.
    for mask in range(1 << (m - 1)):
        first = [0] + [x for k, x in enumerate(rest) if mask >> k & 1]
        bounds = first + [m]
        combos = [()]
        for lo, hi in zip(bounds, bounds[1:]):
            gap = hi - lo - 1
            if gap == 0:
                continue
            shifted = [tuple(tuple(x + lo + 1 for x in b) for b in s) for s in _nc_shapes(gap)]
            combos = [c + s for c in combos for s in shifted]
        out.extend((tuple(first),) + c for c in combos)
    return tuple(out)


def iter_nc(n: int, limit: int = DEFAULT_LIMIT):
    """Yield NC(n) in canonical (lexicographic block) order."""
    if n < 1:
        raise ArgumentError("n must be positive")
    if n > limit:
        raise SizeLimitError(f"n={n} exceeds the enumeration limit {limit}")
    yield from _enumerate_cached(n)


@lru_cache(maxsize=16)
def _enumerate_cached(n: int) -> tuple[NCPartition, ...]:
    shapes = _nc_shapes(n)
    parts = sorted(
        tuple(sorted(tuple(x + 1 for x in b) for b in s)) for s in shapes
    )
    return tuple(_fast(NCPartition, n, blocks) for blocks in parts)


def enumerate_nc(n: int, limit: int = DEFAULT_LIMIT) -> list[NCPartition]:
    """All non-crossing partitions of {1..n}, canonically ordered."""
    return list(iter_nc(n, limit))


def iter_set_partitions(n: int):
    """All set partitions of {1..n} via restricted growth strings."""
    def rec(k, labels, nblocks):
        if k == n:
            blocks = [[] for _ in range(nblocks)]
            for x, lab in enumerate(labels, 1):
                blocks[lab].append(x)
            yield _fast(SetPartition, n, tuple(tuple(b) for b in blocks))
            return
        for lab in range(nblocks + 1):
            labels.append(lab)
            yield from rec(k + 1, labels, max(nblocks, lab + 1))
            labels.pop()
    yield from rec(0, [], 0)


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    if p.n != q.n:
        raise ArgumentError(f"size mismatch: {p.n} vs {q.n}")
    lab = q.labels()
    return all(len({lab[x - 1] for x in b}) == 1 for b in p.blocks)


def coarsenings(p: SetPartition) -> list[NCPartition]:
    """All sigma in NC(n) with p <= sigma (p itself included).

    Blocks of ``p`` are assigned to groups in order of their minima; a partial
    merge that already crosses can never become non-crossing, so it is pruned.
    """
    blocks = p.blocks
    out: list[NCPartition] = []

    def rec(k, groups):
        if k == len(blocks):
            merged = _canonical(groups)
            out.append(_fast(NCPartition, p.n, merged))
            return
        b = blocks[k]
        for g in range(len(groups)):
            trial = groups[:g] + [tuple(sorted(groups[g] + b))] + groups[g + 1:]
            if not _arcs_cross(trial):
                rec(k + 1, trial)
        trial = groups + [b]
        if not _arcs_cross(trial):
            rec(k + 1, trial)

    rec(0, [])
    return sorted(set(out))


@lru_cache(maxsize=None)
def _mobius(p: NCPartition) -> int:
    if len(p.blocks) == 1:
        return 1
    return -sum(_mobius(s) for s in coarsenings(p) if s != p)


def mobius_to_top(p: SetPartition, limit: int = DEFAULT_LIMIT) -> int:
    """The Moebius function mu(p, 1_n) on NC(n).

    Computed from the defining relation: the values of mu(., 1_n) over the
    interval [p, 1_n] sum to 1 if p = 1_n and to 0 otherwise.
    """
    if p.n > limit:
        raise SizeLimitError(f"n={p.n} exceeds the limit {limit}")
    return _mobius(as_nc(p))


def kernel_partition(indices: Sequence) -> SetPartition:
    """Partition of positions 1..len(indices) grouping equal values."""
    if not indices:
        raise ArgumentError("empty index list")
    groups: dict = {}
    for pos, v in enumerate(indices, 1):
        groups.setdefault(v, []).append(pos)
    return SetPartition(len(indices), _canonical(groups.values()))
