"""Dimension-level calculus for reduced S-modules and S-bimodules.

A reduced S-module is modelled by its dimension sequence (arity 1, 2, ...),
a bimodule by a grid of dimensions indexed by (outputs, inputs).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .errors import (
    BudgetExceeded,
    FreenessNotAsserted,
    InvariantFailure,
    NegativeDimension,
    SizeMismatch,
    ValidationError,
)
from .posets import partitions_of
from .walls import enumerate_walls, enumerate_xconn, pair_is_connected

DEFAULT_MAX_ARITY = 8
ORACLE_MAX_ARITY = 6


@dataclass(frozen=True)
class DimSeq:
    dims: tuple[int, ...]  # dims[k-1] is the dimension in arity k

    def __post_init__(self):
        if any((not isinstance(d, int)) or d < 0 for d in self.dims):
            raise NegativeDimension(f"dimensions must be nonnegative integers: {self.dims}")

    @classmethod
    def of(cls, values: Iterable[int]) -> "DimSeq":
        return cls(tuple(int(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "DimSeq":
        text = text.strip()
        if not text:
            raise ValidationError("empty dimension string")
        try:
            return cls.of(int(x) for x in text.split(","))
        except ValueError as exc:
            raise ValidationError(f"cannot parse dimensions {text!r}") from exc

    @classmethod
    def delta(cls, k: int) -> "DimSeq":
        return cls((0,) * (k - 1) + (1,))

    def __getitem__(self, n: int) -> int:
        return self.dims[n - 1] if 1 <= n <= len(self.dims) else 0

    def __len__(self):
        return len(self.dims)

    def __str__(self):
        return ",".join(map(str, self.dims))

    def upto(self, n_max: int) -> "DimSeq":
        return DimSeq(tuple(self[k] for k in range(1, n_max + 1)))

    def __add__(self, other: "DimSeq") -> "DimSeq":
        m = max(len(self), len(other))
        return DimSeq(tuple(self[k] + other[k] for k in range(1, m + 1)))


UNIT = DimSeq((1,))


def _build(f, n_max):
    return DimSeq(tuple(f(n) for n in range(1, n_max + 1)))


def hadamard_dims(p: DimSeq, q: DimSeq, n_max: int = DEFAULT_MAX_ARITY) -> DimSeq:
    return _build(lambda n: p[n] * q[n], n_max)


def conc_dims(p: DimSeq, q: DimSeq, n_max: int = DEFAULT_MAX_ARITY) -> DimSeq:
    return _build(lambda n: sum(comb(n, k) * p[k] * q[n - k] for k in range(1, n)), n_max)


def s_dims(p: DimSeq, n_max: int = DEFAULT_MAX_ARITY) -> DimSeq:
    """Dimensions of the commutative free monoid on p, arity 0 dropped."""
    s = [1]
    for n in range(1, n_max + 1):
        s.append(sum(comb(n - 1, k - 1) * p[k] * s[n - k] for k in range(1, n + 1)))
    return DimSeq(tuple(s[1:]))


def s_log(s: DimSeq, n_max: int = DEFAULT_MAX_ARITY) -> DimSeq:
    """Inverse of s_dims."""
    full = [1] + [s[n] for n in range(1, n_max + 1)]
    g = [0]
    for n in range(1, n_max + 1):
        v = full[n] - sum(comb(n - 1, k - 1) * g[k] * full[n - k] for k in range(1, n))
        if v < 0:
            raise NegativeDimension(f"inverse transform is negative in arity {n}")
        g.append(v)
    return DimSeq(tuple(g[1:]))


def boxtimes_oracle(p: DimSeq, q: DimSeq, n: int) -> int:
    """Connected product in arity n by direct summation over connected partition pairs."""
    total = 0
    for pair in enumerate_xconn(n):
        t = 1
        for b in pair.first.blocks:
            t *= p[len(b)]
        for b in pair.second.blocks:
            t *= q[len(b)]
        total += t
    return total


def boxtimes_dims(p: DimSeq, q: DimSeq, n_max: int = DEFAULT_MAX_ARITY,
                  check_upto: int = ORACLE_MAX_ARITY) -> DimSeq:
    """Connected composition product; fast path, cross-checked by the oracle up to check_upto."""
    fast = s_log(hadamard_dims(s_dims(p, n_max), s_dims(q, n_max), n_max), n_max)
    for n in range(1, min(n_max, check_upto) + 1):
        slow = boxtimes_oracle(p, q, n)
        if slow != fast[n]:
            raise InvariantFailure(f"connected product paths disagree in arity {n}: {fast[n]} vs {slow}")
    return fast


# ------------------------------------------------------------ free protoperad


def _brick_weight(gen: DimSeq, bricks) -> int:
    t = 1
    for b in bricks:
        t *= gen[len(b)]
        if not t:
            break
    return t


def free_proto_dims(gen: DimSeq, rho: int, n: int, **budget) -> int:
    """Weight-rho part of the free protoperad in arity n, summed over connected walls."""
    return sum(_brick_weight(gen, w.bricks) for w in enumerate_walls(n, rho, True, **budget))


def free_weight2_closed(gen: DimSeq, n: int) -> int:
    full = (1 << n) - 1
    total = 0
    for k in range(1, full + 1):
        for l in range(1, full + 1):
            if k | l == full and k & l:
                total += gen[bin(k).count("1")] * gen[bin(l).count("1")]
    return total


def _disjoint_families(n: int):
    """Nonempty families of pairwise disjoint nonempty subsets of 1..n, as bitmask tuples."""
    masks = list(range(1, 1 << n))
    out = []

    def rec(start, used, fam):
        if fam:
            out.append(tuple(fam))
        for i in range(start, len(masks)):
            m = masks[i]
            if not m & used:
                fam.append(m)
                rec(i + 1, used | m, fam)
                fam.pop()

    rec(0, 0, [])
    return out


def free_proto_dims_level_oracle(gen: DimSeq, rho: int, n: int, *, max_arity: int = 4,
                                 max_weight: int = 4) -> int:
    """Free protoperad via sequences of levelled partitions.

    Each level is a partition J of 1..n split as (R1, R2): R1 a nonempty set of
    marked blocks, R2 the remaining blocks, all singletons. A level's family
    of marked blocks determines the level, so we enumerate those families.
    Every marked block of level i+1 must meet the marked blocks of level i,
    and the join of all levels must be the single block 1..n.
    """
    if rho < 1 or n < 1:
        raise ValidationError("need rho >= 1 and n >= 1")
    if n > max_arity or rho > max_weight:
        raise BudgetExceeded(f"level oracle limited to arity {max_arity}, weight {max_weight}")
    full = (1 << n) - 1
    fams = [f for f in _disjoint_families(n) if len(f) <= rho]
    weight = {f: _brick_weight(gen, [[0] * bin(m).count("1") for m in f]) for f in fams}
    total = 0

    def joined(blocks):
        comps = []
        for m in blocks:
            merged = m
            rest = []
            for c in comps:
                if c & merged:
                    merged |= c
                else:
                    rest.append(c)
            comps = rest + [merged]
        return len(comps) == 1 and comps[0] == full

    def rec(prev_union, left, acc, blocks):
        nonlocal total
        if left == 0:
            if joined(blocks):
                total += acc
            return
        for f in fams:
            if len(f) > left or not weight[f]:
                continue
            if prev_union is not None and any(not (m & prev_union) for m in f):
                continue
            u = 0
            for m in f:
                u |= m
            rec(u, left - len(f), acc * weight[f], blocks + list(f))

    rec(None, rho, 1, [])
    return total


# ------------------------------------------------------------------ bimodules


@dataclass(frozen=True)
class BimodDimGrid:
    dims: tuple[tuple[tuple[int, int], int], ...]  # sorted ((m, n), d) with d != 0

    @classmethod
    def of(cls, mapping: Mapping[tuple[int, int], int]) -> "BimodDimGrid":
        items = []
        for (m, n), d in mapping.items():
            if d < 0:
                raise NegativeDimension(f"negative dimension at {(m, n)}")
            if d and (m < 1 or n < 1):
                raise ValidationError(f"reduced grids vanish when an arity is 0, got {(m, n)}")
            if d:
                items.append(((m, n), int(d)))
        return cls(tuple(sorted(items)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        return dict(self.dims).get(key, 0)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.dims)

    def to_json(self) -> dict[str, int]:
        return {f"{m},{n}": d for (m, n), d in self.dims}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "BimodDimGrid":
        out = {}
        for key, d in data.items():
            try:
                m, n = (int(x) for x in key.split(","))
            except ValueError as exc:
                raise ValidationError(f"bad grid key {key!r}") from exc
            out[(m, n)] = d
        return cls.of(out)


def ind_dims(v: DimSeq, n_max: int = DEFAULT_MAX_ARITY) -> BimodDimGrid:
    return BimodDimGrid.of({(n, n): factorial(n) * v[n] for n in range(1, n_max + 1)})


def res_dims(g: BimodDimGrid, n_max: int = DEFAULT_MAX_ARITY) -> DimSeq:
    return _build(lambda n: g[(n, n)], n_max)


def bimod_unit(n_max: int = DEFAULT_MAX_ARITY) -> BimodDimGrid:
    """Unit of the composition product: the regular representation in each arity."""
    return BimodDimGrid.of({(n, n): factorial(n) for n in range(1, n_max + 1)})


def bimod_hadamard_dims(p: BimodDimGrid, q: BimodDimGrid, *, action: str | None = None) -> BimodDimGrid:
    """Composition product (P box Q)(m, n) = sum_N P(m, N) Q(N, n) / |coinvariants|.

    action="free": S_N acts freely on the summands, divide by N!.
    action="trivial": S_N acts trivially on the basis, no division.
    Anything else is refused since general coinvariants need characters.
    """
    if action not in ("free", "trivial"):
        raise FreenessNotAsserted("declare action='free' or action='trivial'")
    pd, qd = p.as_dict(), q.as_dict()
    out = {}
    for (m, k), a in pd.items():
        for (k2, n), b in qd.items():
            if k != k2:
                continue
            term = a * b
            if action == "free":
                if term % factorial(k):
                    raise FreenessNotAsserted(f"S_{k} cannot act freely on {term} basis vectors")
                term //= factorial(k)
            out[(m, n)] = out.get((m, n), 0) + term
    return BimodDimGrid.of(out)


def bimod_conc_dims(p: BimodDimGrid, q: BimodDimGrid) -> BimodDimGrid:
    pd, qd = p.as_dict(), q.as_dict()
    out = {}
    for (a, b), x in pd.items():
        for (c, d), y in qd.items():
            m, n = a + c, b + d
            out[(m, n)] = out.get((m, n), 0) + comb(m, a) * comb(n, b) * x * y
    return BimodDimGrid.of(out)


# ------------------------------------------------------ connected permutations


def _blocks_of(sizes: Sequence[int]) -> list[int]:
    """Group index of each position 1..N for consecutive blocks of the given sizes."""
    out = []
    for g, s in enumerate(sizes):
        out.extend([g] * s)
    return out


def is_connected_permutation(sigma: Sequence[int], alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Inputs 1..N grouped by alpha, outputs grouped by beta, edge i -- sigma(i)."""
    gin, gout = _blocks_of(alpha), _blocks_of(beta)
    a = len(alpha)
    parent = list(range(a + len(beta)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, s in enumerate(sigma):
        parent[find(gin[i])] = find(a + gout[s - 1])
    return len({find(x) for x in range(len(parent))}) == 1


def _check_sizes(alpha, beta):
    if not alpha or not beta or any(x < 1 for x in alpha) or any(x < 1 for x in beta) \
            or sum(alpha) != sum(beta):
        raise SizeMismatch(f"size tuples {tuple(alpha)} and {tuple(beta)} do not match")


def connected_permutations(alpha: Sequence[int], beta: Sequence[int]) -> list[tuple[int, ...]]:
    _check_sizes(alpha, beta)
    n = sum(alpha)
    return [s for s in permutations(range(1, n + 1)) if is_connected_permutation(s, alpha, beta)]


def block_reading(blocks: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """sigma_K as a tuple: the i-th listed element (blocks in order, sorted inside) goes to i."""
    listed = [x for b in blocks for x in sorted(b)]
    out = [0] * len(listed)
    for i, x in enumerate(listed, start=1):
        out[x - 1] = i
    return tuple(out)


def _inverse(sigma: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(sigma)
    for i, x in enumerate(sigma, start=1):
        out[x - 1] = i
    return tuple(out)


def partition_pair_to_connected_permutation(K: Sequence[Sequence[int]], J: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """phi(K, J) = sigma_K o sigma_J^{-1} for ordered partitions of 1..N.

    Input position p (inputs grouped by J's sizes) is the p-th element e of
    J's listing; it goes to the position of e in K's listing (outputs grouped
    by K's sizes). The result is connected whenever (K, J) is.
    """
    n = sum(len(b) for b in K)
    if sum(len(b) for b in J) != n or sorted(x for b in K for x in b) != list(range(1, n + 1)) \
            or sorted(x for b in J for x in b) != list(range(1, n + 1)):
        raise SizeMismatch("K and J must both be ordered partitions of the same 1..N")
    sk = block_reading(K)
    sj_inv = _inverse(block_reading(J))
    return tuple(sk[sj_inv[p] - 1] for p in range(n))


def section(sigma: Sequence[int], kbar: Sequence[int], jbar: Sequence[int]):
    """psi(sigma): K_a = sigma^{-1}(output block a), J = consecutive input blocks."""
    _check_sizes(kbar, jbar)
    if sorted(sigma) != list(range(1, sum(kbar) + 1)):
        raise SizeMismatch("sigma does not match the block sizes")
    inv = _inverse(sigma)
    K, J, pos = [], [], 0
    for k in kbar:
        K.append(tuple(sorted(inv[pos:pos + k])))
        pos += k
    pos = 0
    for j in jbar:
        J.append(tuple(range(pos + 1, pos + j + 1)))
        pos += j
    return tuple(K), tuple(J)


def ordered_connected_pairs(kbar: Sequence[int], jbar: Sequence[int]):
    """All connected pairs (K, J) of ordered partitions of 1..N with block sizes kbar, jbar."""
    _check_sizes(kbar, jbar)
    n = sum(kbar)

    def ordered_with_sizes(sizes):
        out = []
        for blocks in partitions_of(tuple(range(1, n + 1))):
            if len(blocks) != len(sizes):
                continue
            for perm in set(permutations(blocks)):
                if tuple(len(b) for b in perm) == tuple(sizes):
                    out.append(perm)
        return sorted(out)

    return [(K, J) for K in ordered_with_sizes(kbar) for J in ordered_with_sizes(jbar)
            if pair_is_connected(K, J)]


def output_young_class(sigma: Sequence[int], kbar: Sequence[int]) -> tuple:
    """Class of sigma in Young(kbar)\\S_N: which output block each input lands in."""
    g = _blocks_of(kbar)
    return tuple(g[s - 1] for s in sigma)


# ------------------------------------------------------------- induction check


def val_boxtimes_induced_dims(v: DimSeq, w: DimSeq, n: int, *, max_arity: int = 4) -> int:
    """Properadic connected product of Ind v and Ind w in bi-arity (n, n).

    Sums over connected intermediate pairs (K', K'') of [1, N] together with
    size-matched outer partitions I (paired with K') and J (paired with K''),
    then divides by N! for the free S_N action. Only N = n contributes.
    """
    if n < 1:
        raise ValidationError("arity must be positive")
    if n > max_arity:
        raise BudgetExceeded(f"induced product check limited to arity {max_arity}")
    ground = tuple(range(1, n + 1))
    total = 0
    for pair in enumerate_xconn(n):
        kp, kpp = pair.first.blocks, pair.second.blocks
        left = sum(
            _ind_weight(v, kp, I) for I in _matched_partitions(ground, [len(b) for b in kp])
        )
        if not left:
            continue
        right = sum(
            _ind_weight(w, kpp, J) for J in _matched_partitions(ground, [len(b) for b in kpp])
        )
        total += left * right
    if total % factorial(n):
        raise InvariantFailure("coinvariant dimension is not an integer")
    return total // factorial(n)


def _matched_partitions(ground, sizes):
    """Sequences of disjoint blocks covering ground with the given sizes, in order."""
    def rec(rest, i):
        if i == len(sizes):
            if not rest:
                yield ()
            return
        for c in combinations(rest, sizes[i]):
            left = tuple(x for x in rest if x not in c)
            for tail in rec(left, i + 1):
                yield (c,) + tail

    yield from rec(tuple(ground), 0)


def _ind_weight(v: DimSeq, inner, outer) -> int:
    t = 1
    for a, b in zip(outer, inner):
        if len(a) != len(b):
            return 0
        t *= factorial(len(a)) * v[len(a)]
    return t
