"""Finite strict posets and set partitions.

Poset elements are the indices 0..m-1 (they index bricks or colours).
Ground sets are {1..n}; partitions are stored as tuples of sorted tuples,
blocks sorted by their minimum.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Iterable

from .errors import CycleDetected, IndexOutOfRange, NotSuccessorPair, ValidationError

Pair = tuple[int, int]
Block = tuple[int, ...]


@dataclass(frozen=True)
class StrictPoset:
    size: int
    relation: frozenset  # of (a, b) meaning a < b, transitively closed

    def __post_init__(self):
        for a, b in self.relation:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise IndexOutOfRange(f"pair {(a, b)} outside carrier of size {self.size}")
            if a == b or (b, a) in self.relation:
                raise CycleDetected(f"pair {(a, b)} breaks antisymmetry")

    def less(self, a: int, b: int) -> bool:
        return (a, b) in self.relation

    def comparable(self, a: int, b: int) -> bool:
        return (a, b) in self.relation or (b, a) in self.relation

    @cached_property
    def below(self) -> tuple[frozenset, ...]:
        down = [set() for _ in range(self.size)]
        for a, b in self.relation:
            down[b].add(a)
        return tuple(frozenset(d) for d in down)

    @cached_property
    def heights(self) -> tuple[int, ...]:
        h = [0] * self.size
        # elements with fewer predecessors come first in any linear extension
        for k in sorted(range(self.size), key=lambda k: len(self.below[k])):
            h[k] = 1 + max((h[j] for j in self.below[k]), default=0)
        return tuple(h)

    @cached_property
    def succ(self) -> tuple[Pair, ...]:
        out = []
        for a, b in sorted(self.relation):
            if not any((a, t) in self.relation for t in self.below[b]):
                out.append((a, b))
        return tuple(out)


def transitive_closure(pairs: Iterable[Pair], m: int) -> StrictPoset:
    pairs = set(pairs)
    for a, b in pairs:
        if not (0 <= a < m and 0 <= b < m):
            raise IndexOutOfRange(f"pair {(a, b)} outside carrier of size {m}")
    up = [set() for _ in range(m)]
    for a, b in pairs:
        up[a].add(b)
    # Warshall on adjacency sets
    for k in range(m):
        for i in range(m):
            if k in up[i]:
                up[i] |= up[k]
    rel = set()
    for a in range(m):
        if a in up[a]:
            raise CycleDetected(f"element {a} lies on a cycle")
        rel.update((a, b) for b in up[a])
    return StrictPoset(m, frozenset(rel))


def succ_pairs(p: StrictPoset) -> list[Pair]:
    return list(p.succ)


def height(p: StrictPoset, k: int) -> int:
    if not 0 <= k < p.size:
        raise IndexOutOfRange(f"{k} not in carrier of size {p.size}")
    return p.heights[k]


def quotient_by_successor_pair(p: StrictPoset, pair: Pair) -> StrictPoset:
    """Merge k and l; the merged class takes index min(k, l), others shift down."""
    k, l = pair
    if pair not in p.succ:
        raise NotSuccessorPair(f"{pair} is not a successor pair")
    lo, hi = min(k, l), max(k, l)

    def idx(x):
        if x == hi:
            return lo
        return x - 1 if x > hi else x

    rel = {(idx(a), idx(b)) for a, b in p.relation}
    rel.discard((lo, lo))
    # the image need not be transitive (s<l, k<t gives s<[k~l]<t), so close it
    return transitive_closure(rel, p.size - 1)


def restrict(p: StrictPoset, elements: Iterable[int]) -> StrictPoset:
    """Induced order on a subset, relabelled 0..len-1 in increasing order."""
    els = sorted(elements)
    pos = {e: i for i, e in enumerate(els)}
    rel = {(pos[a], pos[b]) for a, b in p.relation if a in pos and b in pos}
    return StrictPoset(len(els), frozenset(rel))


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class SetPartition:
    n: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("ground set must have at least one element")
        seen = []
        for b in self.blocks:
            if not b:
                raise ValidationError("empty block")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValidationError(f"blocks {self.blocks} do not partition 1..{self.n}")

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        return cls(n, normalize_blocks(blocks))

    def __len__(self):
        return len(self.blocks)


def normalize_blocks(blocks: Iterable[Iterable[int]]) -> tuple[Block, ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _restricted_growth(n: int):
    # restricted growth strings give each set partition exactly once
    def rec(i, labels, top):
        if i == n:
            yield tuple(labels)
            return
        for c in range(top + 2):
            labels.append(c)
            yield from rec(i + 1, labels, max(top, c))
            labels.pop()

    if n == 0:
        yield ()
        return
    yield from rec(1, [0], 0)


@lru_cache(maxsize=None)
def partitions_of(elements: tuple[int, ...]) -> tuple[tuple[Block, ...], ...]:
    """All set partitions of the given elements (blocks sorted by minimum)."""
    out = []
    for rgs in _restricted_growth(len(elements)):
        blocks = [[] for _ in range(max(rgs) + 1)] if rgs else []
        for e, c in zip(elements, rgs):
            blocks[c].append(e)
        out.append(tuple(tuple(b) for b in blocks))
    return tuple(sorted(out))


def enumerate_partitions(n: int) -> list[SetPartition]:
    if n < 1:
        raise ValidationError("n must be positive")
    return [SetPartition(n, b) for b in partitions_of(tuple(range(1, n + 1)))]


def enumerate_ordered_partitions(n: int, r: int) -> list[tuple[Block, ...]]:
    if n < 1 or not 1 <= r <= n:
        raise ValidationError("need n >= 1 and 1 <= r <= n")
    out = set()
    for blocks in partitions_of(tuple(range(1, n + 1))):
        if len(blocks) == r:
            out.update(permutations(blocks))
    return sorted(out)
