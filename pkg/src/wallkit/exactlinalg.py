"""Exact integer matrices: rank, product and Smith normal form.

Everything runs on Python ints, so there is no overflow and no floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix shape")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = list(zip(*b.entries)) if b.rows else [()] * b.cols
    out = tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a.entries
    )
    return IntMatrix(a.rows, b.cols, out)


def rank_exact(m: IntMatrix) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    rank = 0
    prev = 1
    for c in range(nc):
        if rank == nr:
            break
        piv = next((i for i in range(rank, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, nr):
            f = a[i][c]
            row = a[i]
            prow = a[rank]
            for j in range(c + 1, nc):
                # division is exact (Sylvester identity)
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank


def smith_normal_form(m: IntMatrix) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of m."""
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    factors = []
    t = 0
    while t < min(nr, nc):
        # smallest nonzero entry of the remaining block becomes the pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    dirty = dirty or a[t][j] != 0
            if not dirty:
                bad = next(
                    (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
            # move the smallest nonzero entry of row t / column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        factors.append(abs(a[t][t]))
        t += 1
    return factors
