"""Colourings of a wall and the signed colouring complex over the integers.

A colouring is a partition of the brick indices into fibers. Each fiber must
be connected as a sub-wall, and the order induced on fibers must be acyclic.
Colour labels never exist in memory: a colouring is its fiber partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Sequence

from .errors import BudgetExceeded, InvalidMerge, SignConventionBroken, ValidationError
from .exactlinalg import IntMatrix, matmul, rank_exact, smith_normal_form
from .posets import partitions_of, transitive_closure
from .walls import Wall, connected_components, sub_wall

MAX_BRICKS = 8

Fibers = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Shape:
    """What the complex depends on: brick count, order, intersections and brick ranks."""
    size: int
    relation: frozenset
    meets: frozenset  # unordered intersecting pairs (a, b), a < b
    rank: tuple[int, ...]  # position of each brick in the total order by (height, min)

    @classmethod
    def of(cls, w: Wall) -> "Shape":
        r = len(w)
        meets = frozenset((a, b) for a in range(r) for b in range(a + 1, r) if w.meets(a, b))
        perm = sorted(range(r), key=lambda i: w.keys[i])
        rank = [0] * r
        for pos, i in enumerate(perm):
            rank[i] = pos
        return cls(r, w.order.relation, meets, tuple(rank))

    def meet(self, a, b) -> bool:
        return (min(a, b), max(a, b)) in self.meets


def brick_total_order(w: Wall) -> list[int]:
    """Brick indices listed by the total order (height, then minimum element)."""
    return sorted(range(len(w)), key=lambda i: w.keys[i][:2])


# ----------------------------------------------------------------- validity


def _fiber_connected(sh: Shape, fiber: Sequence[int]) -> bool:
    if len(fiber) == 1:
        return True
    rel = sh.relation
    fs = set(fiber)
    parent = {x: x for x in fiber}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a in fiber:
        for b in fiber:
            if (a, b) in rel and sh.meet(a, b):
                # successor inside the restricted order?
                if not any((a, t) in rel and (t, b) in rel for t in fs):
                    parent[find(a)] = find(b)
    return len({find(x) for x in fiber}) == 1


def _fiber_relation(sh: Shape, fibers: Fibers) -> set[tuple[int, int]]:
    where = {}
    for c, f in enumerate(fibers):
        for x in f:
            where[x] = c
    return {(where[a], where[b]) for a, b in sh.relation if where[a] != where[b]}


def _quotient(sh: Shape, fibers: Fibers):
    """Closed order on fibers, or None when the induced relation has a cycle."""
    try:
        return transitive_closure(_fiber_relation(sh, fibers), len(fibers))
    except ValidationError:
        return None


def _is_colouring(sh: Shape, fibers: Fibers) -> bool:
    return all(_fiber_connected(sh, f) for f in fibers) and _quotient(sh, fibers) is not None


@lru_cache(maxsize=None)
def _colourings(sh: Shape) -> tuple[Fibers, ...]:
    return tuple(f for f in partitions_of(tuple(range(sh.size))) if _is_colouring(sh, f))


# ------------------------------------------------------------------- public


@dataclass(frozen=True)
class Colouring:
    wall: Wall
    fibers: Fibers

    @cached_property
    def shape(self) -> Shape:
        return Shape.of(self.wall)

    @cached_property
    def order(self):
        q = _quotient(self.shape, self.fibers)
        if q is None:
            raise ValidationError("fiber relation has a cycle")
        return q

    @cached_property
    def colour_rank(self) -> tuple[int, ...]:
        """Rank of each fiber in the colour order (by the rank of its lowest brick)."""
        mins = [min(self.shape.rank[x] for x in f) for f in self.fibers]
        order = sorted(range(len(self.fibers)), key=lambda c: mins[c])
        rank = [0] * len(order)
        for pos, c in enumerate(order):
            rank[c] = pos
        return tuple(rank)

    def __len__(self):
        return len(self.fibers)


def _check_budget(w: Wall, max_bricks: int):
    if len(w) > max_bricks:
        raise BudgetExceeded(f"{len(w)} bricks beyond colouring budget {max_bricks}")


def is_valid_colouring(w: Wall, fibers: Fibers) -> bool:
    return _is_colouring(Shape.of(w), tuple(sorted(tuple(sorted(f)) for f in fibers)))


def enumerate_colourings(w: Wall, *, max_bricks: int = MAX_BRICKS) -> dict[int, list[Colouring]]:
    """Colourings graded by number of colours, each degree in canonical order."""
    _check_budget(w, max_bricks)
    out = {k: [] for k in range(1, len(w) + 1)}
    for f in _colourings(Shape.of(w)):
        out[len(f)].append(Colouring(w, f))
    return out


def succ_colour_pairs(c: Colouring) -> list[tuple[int, int]]:
    """Successor pairs (x, y), x below y, of the colour order, by rank of the lower colour then the upper."""
    rk = c.colour_rank
    return sorted(c.order.succ, key=lambda p: (min(rk[p[0]], rk[p[1]]), max(rk[p[0]], rk[p[1]])))


def merge_colour_pair(c: Colouring, pair: tuple[int, int]) -> Colouring:
    x, y = pair
    if pair not in c.order.succ:
        raise InvalidMerge(f"{pair} is not a successor pair of colours")
    merged = tuple(sorted(c.fibers[x] + c.fibers[y]))
    fibers = tuple(sorted([f for i, f in enumerate(c.fibers) if i not in (x, y)] + [merged]))
    if not _is_colouring(c.shape, fibers):
        raise InvalidMerge(f"merging {pair} does not give a colouring")
    return Colouring(c.wall, fibers)


def sign_lambda(c: Colouring, pair: tuple[int, int]) -> int:
    """Exponent of the sign of the merge of x < y.

    Count the colours before y other than x, plus the colours strictly
    between x and y in the colour order that are covered by y.
    """
    x, y = pair
    rk = c.colour_rank
    succ = c.order.succ
    first = sum(1 for z in range(len(c)) if rk[z] < rk[y] and z != x)
    second = sum(1 for z in range(len(c)) if rk[x] < rk[z] < rk[y] and (z, y) in succ)
    return first + second


SignRule = Callable[[Colouring, tuple[int, int]], int]


@dataclass(frozen=True)
class IntegerChainComplex:
    wall: Wall
    basis: dict  # degree -> list of Colouring
    boundary: dict  # degree k -> IntMatrix from degree k to degree k-1 (k >= 2)
    sign_rule: str = "coherent"

    @property
    def top(self) -> int:
        return len(self.wall)

    def graded_counts(self) -> list[int]:
        """Number of colourings in degrees 1..top."""
        return [len(self.basis[k]) for k in range(1, self.top + 1)]

    def euler(self) -> int:
        return sum((-1) ** k * len(self.basis[k]) for k in range(1, self.top + 1))


def _coherent_signs(faces: list[int], lower: dict[int, dict[int, int]]) -> list[int]:
    """Signs for the faces of one colouring making its boundary a cycle.

    Any colouring two merges below is reached along exactly two paths, so
    the faces sharing a common face fix each other's relative sign. The first
    face gets +1 and signs spread along shared faces.
    """
    sign = [0] * len(faces)
    by_sub: dict[int, list[int]] = {}
    for i, f in enumerate(faces):
        for h in lower.get(f, {}):
            by_sub.setdefault(h, []).append(i)
    for start in range(len(faces)):
        if sign[start]:
            continue
        sign[start] = 1
        todo = [start]
        while todo:
            i = todo.pop()
            for h, a in lower.get(faces[i], {}).items():
                for j in by_sub[h]:
                    if j == i:
                        continue
                    want = -sign[i] * a * lower[faces[j]][h]
                    if sign[j] == 0:
                        sign[j] = want
                        todo.append(j)
                    # a clash (only possible below a corrupted degree) is left in
                    # place and shows up in the final boundary check
    return sign


SIGN_RULES = ("coherent", "lambda")


def build_complex(w: Wall, *, sign_rule: str = "coherent", corrupt: Callable | None = None,
                  max_bricks: int = MAX_BRICKS, check: bool = True) -> IntegerChainComplex:
    """Colouring complex of w.

    sign_rule="lambda" uses sign_lambda directly. sign_rule="coherent" uses the
    signs spread along two-step merge diamonds (see _coherent_signs).
    corrupt(colouring, pair, sign) -> sign is a test hook applied last.
    """
    if sign_rule not in SIGN_RULES:
        raise ValidationError(f"unknown sign rule {sign_rule!r}")
    basis = enumerate_colourings(w, max_bricks=max_bricks)
    index = {k: {c.fibers: i for i, c in enumerate(cs)} for k, cs in basis.items()}
    boundary = {}
    cols_prev: dict[int, dict[int, int]] = {}  # column -> {row: entry} of the previous boundary
    for k in range(2, len(w) + 1):
        rows = [[0] * len(basis[k]) for _ in basis[k - 1]]
        cols: dict[int, dict[int, int]] = {}
        for j, c in enumerate(basis[k]):
            pairs = succ_colour_pairs(c)
            faces = [index[k - 1][merge_colour_pair(c, p).fibers] for p in pairs]
            if sign_rule == "lambda":
                signs = [(-1) ** sign_lambda(c, p) for p in pairs]
            else:
                signs = _coherent_signs(faces, cols_prev)
            if corrupt is not None:
                signs = [corrupt(c, p, s) for p, s in zip(pairs, signs)]
            for f, s in zip(faces, signs):
                rows[f][j] += s
            cols[j] = {f: rows[f][j] for f in faces if rows[f][j]}
        boundary[k] = IntMatrix.from_rows(rows, len(basis[k]))
        cols_prev = cols
    cx = IntegerChainComplex(w, basis, boundary, sign_rule)
    if check and not d_squared_zero(cx):
        raise SignConventionBroken("boundary squared is not zero")
    return cx


def d_squared_zero(cx: IntegerChainComplex) -> bool:
    return all(matmul(cx.boundary[k - 1], cx.boundary[k]).is_zero()
               for k in range(3, cx.top + 1))


def betti_numbers(cx: IntegerChainComplex) -> list[tuple[int, list[int]]]:
    """(Betti number, torsion factors > 1) of the homology in degrees 1..top."""
    ranks = {k: rank_exact(m) for k, m in cx.boundary.items()}
    out = []
    for k in range(1, cx.top + 1):
        b = len(cx.basis[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        tors = [d for d in smith_normal_form(cx.boundary[k + 1]) if d > 1] if k + 1 in cx.boundary else []
        out.append((b, tors))
    return out


def has_successors(w: Wall) -> bool:
    return bool(w.order.relation)


@dataclass(frozen=True)
class ComplexSummary:
    graded_counts: tuple[int, ...]
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    d_squared_zero: bool
    euler: int

    @property
    def acyclic(self) -> bool:
        return not any(self.betti) and not any(self.torsion)


def _compute_summary(w: Wall, sign_rule: str) -> ComplexSummary:
    cx = build_complex(w, sign_rule=sign_rule, check=False)
    hom = betti_numbers(cx)
    return ComplexSummary(
        tuple(cx.graded_counts()),
        tuple(b for b, _ in hom),
        tuple(tuple(t) for _, t in hom),
        d_squared_zero(cx),
        cx.euler(),
    )


_SUMMARIES: dict = {}


def summarize(w: Wall, *, sign_rule: str = "coherent", max_bricks: int = MAX_BRICKS) -> ComplexSummary:
    """Counts, homology and the boundary check for w.

    Walls with the same Shape have literally the same complex (same bases,
    same matrices), so results are memoized on the shape.
    """
    _check_budget(w, max_bricks)
    key = (Shape.of(w), sign_rule)
    hit = _SUMMARIES.get(key)
    if hit is None:
        hit = _SUMMARIES[key] = _compute_summary(w, sign_rule)
    return hit


def complex_tensor_check(w: Wall) -> bool:
    """Compare the complex of w with the tensor product of its components' complexes.

    Degrees add under the tensor product; over Q the Betti numbers of the
    product are the convolution of those of the factors.
    """
    comps = connected_components(w)
    if len(comps) < 2:
        raise ValidationError("wall is connected")
    counts, betti = {0: 1}, {0: 1}
    for comp in comps:
        s = summarize(sub_wall(w, comp))
        counts = _convolve(counts, s.graded_counts)
        betti = _convolve(betti, s.betti)
    whole = summarize(w)
    n = len(w)
    want_counts = tuple(counts.get(k, 0) for k in range(1, n + 1))
    want_betti = tuple(betti.get(k, 0) for k in range(1, n + 1))
    return whole.graded_counts == want_counts and whole.betti == want_betti


def _convolve(acc: dict, graded: Sequence[int]) -> dict:
    out = {}
    for d, a in acc.items():
        for k, b in enumerate(graded, start=1):
            if a and b:
                out[d + k] = out.get(d + k, 0) + a * b
    return out
