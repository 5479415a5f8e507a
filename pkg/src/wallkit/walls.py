"""Walls over {1..n}: construction, canonical form, enumeration and products.

A wall is a list of bricks (nonempty subsets, repeats allowed) with a strict
order on brick indices generated by comparabilities of intersecting bricks.
Brick indices are 0-based; ground elements are 1..n.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import (
    BudgetExceeded,
    CoverageFailure,
    EmptyBrick,
    EmptyOverlap,
    GroundMismatch,
    NotAPermutation,
    ValidationError,
)
from .posets import Block, SetPartition, StrictPoset, partitions_of, transitive_closure

MAX_GROUND = 6
MAX_BRICKS = 6


def _mask(block: Iterable[int]) -> int:
    m = 0
    for x in block:
        m |= 1 << (x - 1)
    return m


def _elements(mask: int) -> Block:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Wall:
    n: int
    bricks: tuple[Block, ...]
    order: StrictPoset

    def __len__(self):
        return len(self.bricks)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(_mask(b) for b in self.bricks)

    def meets(self, i: int, j: int) -> bool:
        return bool(self.masks[i] & self.masks[j])

    @cached_property
    def keys(self) -> tuple[tuple, ...]:
        """Sort key (height, min element, elements) of each brick; also the order used for colours."""
        h = self.order.heights
        return tuple((h[i], b[0], b) for i, b in enumerate(self.bricks))

    def fiber(self, s: int) -> list[int]:
        return [i for i, m in enumerate(self.masks) if m >> (s - 1) & 1]

    def __repr__(self):
        rel = sorted(self.order.succ)
        return f"Wall(n={self.n}, bricks={list(self.bricks)}, covers={rel})"


def _check_bricks(n: int, bricks: Sequence[Iterable[int]]) -> tuple[Block, ...]:
    if n < 1:
        raise ValidationError("ground set must have at least one element")
    out = []
    for b in bricks:
        t = tuple(sorted(set(b)))
        if not t:
            raise EmptyBrick("bricks must be nonempty")
        if t[0] < 1 or t[-1] > n:
            raise CoverageFailure(f"brick {t} not inside 1..{n}")
        out.append(t)
    covered = set().union(*out) if out else set()
    if covered != set(range(1, n + 1)):
        raise CoverageFailure(f"bricks do not cover 1..{n}")
    return tuple(out)


def _sequence_order(masks: Sequence[int]) -> StrictPoset:
    # position order on intersecting pairs, closed; a linear extension by construction
    below = []
    rel = set()
    for j, mj in enumerate(masks):
        d = set()
        for i in range(j):
            if masks[i] & mj:
                d.add(i)
                d |= below[i]
        below.append(d)
        rel.update((i, j) for i in d)
    return StrictPoset(len(masks), frozenset(rel))


def canonical_form(w: Wall) -> Wall:
    perm = sorted(range(len(w)), key=lambda i: w.keys[i])
    if perm == list(range(len(w))):
        return w
    pos = {old: new for new, old in enumerate(perm)}
    rel = frozenset((pos[a], pos[b]) for a, b in w.order.relation)
    return Wall(w.n, tuple(w.bricks[i] for i in perm), StrictPoset(len(w), rel))


def wall_from_brick_sequence(n: int, bricks: Sequence[Iterable[int]]) -> Wall:
    bricks = _check_bricks(n, bricks)
    order = _sequence_order([_mask(b) for b in bricks])
    return canonical_form(Wall(n, bricks, order))


def make_wall(n: int, bricks: Sequence[Iterable[int]], relations: Iterable[tuple[int, int]]) -> Wall:
    """Wall from generating relations on 0-based brick indices; closes and validates."""
    bricks = _check_bricks(n, bricks)
    w = Wall(n, bricks, transitive_closure(relations, len(bricks)))
    report = validate_wall(w)
    if report is not None:
        raise ValidationError(f"{report[0]}: {report[1]}")
    return canonical_form(w)


def validate_wall(w: Wall):
    """None if w is a valid wall, else (clause, detail) for the first failure."""
    for b in w.bricks:
        if not b:
            return ("empty-brick", "a brick is empty")
        if min(b) < 1 or max(b) > w.n:
            return ("coverage", f"brick {b} leaves 1..{w.n}")
    if set().union(*map(set, w.bricks)) != set(range(1, w.n + 1)):
        return ("coverage", f"bricks do not cover 1..{w.n}")
    if w.order.size != len(w.bricks):
        return ("order-size", "order carrier differs from brick count")
    if transitive_closure(w.order.relation, w.order.size).relation != w.order.relation:
        return ("order-not-closed", "order is not transitively closed")
    for s in range(1, w.n + 1):
        fib = w.fiber(s)
        for x in range(len(fib)):
            for y in range(x + 1, len(fib)):
                if not w.order.comparable(fib[x], fib[y]):
                    return ("fiber-not-totally-ordered", f"bricks {fib[x]},{fib[y]} over {s}")
    gen = [(a, b) for a, b in w.order.relation if w.meets(a, b)]
    if transitive_closure(gen, len(w)).relation != w.order.relation:
        return ("non-canonical-order", "order relates bricks not forced by intersections")
    return None


def is_canonical(w: Wall) -> bool:
    return list(w.keys) == sorted(w.keys)


# -------------------------------------------------------------- enumeration


def check_budget(n: int, r: int, max_ground: int = MAX_GROUND, max_bricks: int = MAX_BRICKS):
    if n > max_ground or r > max_bricks:
        raise BudgetExceeded(f"ground {n} / bricks {r} beyond budget {max_ground}/{max_bricks}")


def _canonical_sequences(n: int, r: int):
    """Brick mask sequences that are canonical forms, each wall once.

    Appending a brick never changes heights of earlier bricks, so keys
    can be checked incrementally and the search pruned.
    """
    full = (1 << n) - 1
    cand = [(m, _elements(m)) for m in range(1, full + 1)]
    masks, heights, keys = [], [], []

    def rec(cover):
        if len(masks) == r:
            if cover == full:
                yield tuple(masks)
            return
        last = keys[-1] if keys else None
        for m, els in cand:
            h = 1 + max((heights[i] for i, mi in enumerate(masks) if mi & m), default=0)
            key = (h, els[0], els)
            if last is not None and key <= last:
                continue
            masks.append(m)
            heights.append(h)
            keys.append(key)
            yield from rec(cover | m)
            masks.pop()
            heights.pop()
            keys.pop()

    yield from rec(0)


@lru_cache(maxsize=64)
def _enumerate(n: int, r: int, connected: bool) -> tuple[Wall, ...]:
    out = []
    for masks in _canonical_sequences(n, r):
        w = Wall(n, tuple(_elements(m) for m in masks), _sequence_order(masks))
        if connected and not is_connected(w):
            continue
        out.append(w)
    out.sort(key=wall_sort_key)
    return tuple(out)


def wall_sort_key(w: Wall):
    return (w.bricks, tuple(sorted(w.order.relation)))


def enumerate_walls(n: int, r: int, connected: bool = False, *,
                    max_ground: int = MAX_GROUND, max_bricks: int = MAX_BRICKS) -> list[Wall]:
    if n < 1 or r < 1:
        raise ValidationError("need n >= 1 and r >= 1")
    check_budget(n, r, max_ground, max_bricks)
    return list(_enumerate(n, r, connected))


def count_ordered_walls(n: int, r: int, **budget) -> int:
    from math import factorial

    return factorial(r) * len(enumerate_walls(n, r, **budget))


# ------------------------------------------------------------- connectivity


def connected_components(w: Wall) -> tuple[tuple[int, ...], ...]:
    parent = list(range(len(w)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in w.order.succ:
        if w.meets(a, b):
            parent[find(a)] = find(b)
    groups = {}
    for i in range(len(w)):
        groups.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def is_connected(w: Wall) -> bool:
    return len(connected_components(w)) == 1


def kappa(w: Wall) -> SetPartition:
    blocks = []
    for comp in connected_components(w):
        blocks.append(set().union(*(w.bricks[i] for i in comp)))
    return SetPartition.of(w.n, blocks)


def sub_wall(w: Wall, indices: Iterable[int]) -> Wall:
    """Bricks at the given indices, ground relabelled onto 1..m increasingly."""
    idx = sorted(indices)
    ground = sorted(set().union(*(w.bricks[i] for i in idx)))
    lab = {s: k + 1 for k, s in enumerate(ground)}
    pos = {i: k for k, i in enumerate(idx)}
    rel = frozenset((pos[a], pos[b]) for a, b in w.order.relation if a in pos and b in pos)
    bricks = tuple(tuple(lab[s] for s in w.bricks[i]) for i in idx)
    return canonical_form(Wall(len(ground), bricks, StrictPoset(len(idx), rel)))


# ----------------------------------------------------------- partition pairs


@dataclass(frozen=True)
class PartitionPair:
    first: SetPartition
    second: SetPartition

    def __post_init__(self):
        if self.first.n != self.second.n:
            raise GroundMismatch("partitions live on different grounds")


def _stack(n: int, lower: Sequence[Block], upper: Sequence[Block],
           lower_rel=(), upper_rel=()) -> Wall:
    k = len(lower)
    lm = [_mask(b) for b in lower]
    um = [_mask(b) for b in upper]
    pairs = set(lower_rel)
    pairs.update((a + k, b + k) for a, b in upper_rel)
    pairs.update((a, k + b) for a in range(k) for b in range(len(upper)) if lm[a] & um[b])
    bricks = tuple(lower) + tuple(upper)
    return canonical_form(Wall(n, bricks, transitive_closure(pairs, len(bricks))))


def wall_from_partition_pair(p: PartitionPair) -> Wall:
    return _stack(p.first.n, p.first.blocks, p.second.blocks)


def pair_is_connected(first: Sequence[Block], second: Sequence[Block]) -> bool:
    k = len(first)
    parent = list(range(k + len(second)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, ba in enumerate(first):
        sa = set(ba)
        for b, bb in enumerate(second):
            if sa.intersection(bb):
                parent[find(a)] = find(k + b)
    return len({find(x) for x in range(len(parent))}) == 1


@lru_cache(maxsize=None)
def _xconn(n: int) -> tuple[PartitionPair, ...]:
    parts = partitions_of(tuple(range(1, n + 1)))
    return tuple(
        PartitionPair(SetPartition(n, i), SetPartition(n, j))
        for i in parts for j in parts if pair_is_connected(i, j)
    )


def enumerate_xconn(n: int, *, max_ground: int = 7) -> list[PartitionPair]:
    if n < 1:
        raise ValidationError("n must be positive")
    if n > max_ground:
        raise BudgetExceeded(f"ground {n} beyond budget {max_ground}")
    return list(_xconn(n))


# ----------------------------------------------------------------- products


def vertical_product(w: Wall, l: Wall) -> Wall:
    """w placed below l over the same ground."""
    if w.n != l.n:
        raise GroundMismatch(f"grounds {w.n} and {l.n} differ")
    return _stack(w.n, w.bricks, l.bricks, w.order.relation, l.order.relation)


def horizontal_product(w: Wall, l: Wall) -> Wall:
    """Disjoint union, ground of l shifted past that of w."""
    k = len(w)
    bricks = w.bricks + tuple(tuple(s + w.n for s in b) for b in l.bricks)
    rel = set(w.order.relation) | {(a + k, b + k) for a, b in l.order.relation}
    return canonical_form(Wall(w.n + l.n, bricks, StrictPoset(len(bricks), frozenset(rel))))


def _check_injection(f: Sequence[int], size: int, s: int):
    if len(f) != size or len(set(f)) != size or any(not 1 <= x <= s for x in f):
        raise ValidationError(f"{tuple(f)} is not an injection of 1..{size} into 1..{s}")


def graft(iota: Sequence[int], jota: Sequence[int], wm: Wall, wn: Wall, s: int | None = None) -> Wall:
    """Relabel wm, wn into 1..s along iota, jota and put wm under wn where they meet.

    iota[i-1] is the image of i; s defaults to the largest image.
    """
    if s is None:
        s = max(max(iota), max(jota))
    _check_injection(iota, wm.n, s)
    _check_injection(jota, wn.n, s)
    if set(iota) | set(jota) != set(range(1, s + 1)):
        raise CoverageFailure("images of the injections do not cover the target")
    if not set(iota) & set(jota):
        raise EmptyOverlap("images of the injections are disjoint")
    lower = [tuple(sorted(iota[x - 1] for x in b)) for b in wm.bricks]
    upper = [tuple(sorted(jota[x - 1] for x in b)) for b in wn.bricks]
    return _stack(s, lower, upper, wm.order.relation, wn.order.relation)


def check_permutation(sigma: Sequence[int], n: int):
    if sorted(sigma) != list(range(1, n + 1)):
        raise NotAPermutation(f"{tuple(sigma)} is not a permutation of 1..{n}")


def aut_action(w: Wall, sigma: Sequence[int]) -> Wall:
    """Right action w.sigma: each brick B goes to sigma^{-1}(B).

    With sigma[i-1] = sigma(i) and (sigma tau)(i) = sigma(tau(i)) this gives
    (w.sigma).tau = w.(sigma tau).
    """
    check_permutation(sigma, w.n)
    inv = [0] * w.n
    for i, x in enumerate(sigma, start=1):
        inv[x - 1] = i
    bricks = tuple(tuple(sorted(inv[x - 1] for x in b)) for b in w.bricks)
    return canonical_form(Wall(w.n, bricks, w.order))


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """(sigma tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


# --------------------------------------------------------------------- JSON


def wall_to_dict(w: Wall) -> dict:
    w = canonical_form(w)
    return {
        "ground": w.n,
        "bricks": [list(b) for b in w.bricks],
        "relations": [[a + 1, b + 1] for a, b in sorted(w.order.relation)],
    }


def wall_from_dict(d: dict) -> Wall:
    if not isinstance(d, dict) or set(d) - {"ground", "bricks", "relations"} or "ground" not in d \
            or "bricks" not in d:
        raise ValidationError("wall must be an object with keys ground, bricks, relations")
    n, bricks, rels = d["ground"], d["bricks"], d.get("relations", [])
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError("ground must be an integer")
    if not isinstance(bricks, list) or not all(
        isinstance(b, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in b)
        for b in bricks
    ):
        raise ValidationError("bricks must be a list of integer lists")
    if not isinstance(rels, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) for x in p) for p in rels
    ):
        raise ValidationError("relations must be a list of [i, j] pairs")
    for b in bricks:
        if len(set(b)) != len(b):
            raise ValidationError(f"brick {b} repeats an element")
    return make_wall(n, bricks, [(a - 1, b - 1) for a, b in rels])
