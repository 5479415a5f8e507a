"""Brute-force oracles, written without the package's own algorithms.

Everything here is deliberately naive: plain loops over all candidates,
checked straight from the definitions.
"""
from itertools import combinations, permutations, product
from math import comb


# ------------------------------------------------------------------- posets


def closure(pairs, m):
    """Transitive closure by repeated composition; None on a cycle."""
    rel = set(pairs)
    while True:
        new = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not new:
            break
        rel |= new
    if any((a, a) in rel for a in range(m)):
        return None
    return rel


def covers(rel, m):
    return sorted((a, b) for a, b in rel if not any((a, t) in rel and (t, b) in rel for t in range(m)))


def height(rel, m, k):
    """Longest chain ending at k, found by listing every chain."""
    best = 1
    for size in range(2, m + 1):
        for chain in permutations(range(m), size):
            if chain[-1] == k and all((chain[i], chain[i + 1]) in rel for i in range(size - 1)):
                best = max(best, size)
    return best


def set_partitions(elements):
    """All set partitions, by assigning every element a label and deduplicating."""
    elements = list(elements)
    out = set()
    for labels in product(range(len(elements)), repeat=len(elements)):
        blocks = {}
        for e, l in zip(elements, labels):
            blocks.setdefault(l, []).append(e)
        out.add(tuple(sorted(tuple(sorted(b)) for b in blocks.values())))
    return sorted(out)


# -------------------------------------------------------------------- walls


def ordered_walls(n, r):
    """Ordered walls over 1..n: brick tuples with every orientation of the
    intersecting pairs that closes to a strict order."""
    full = set(range(1, n + 1))
    subsets = [frozenset(c) for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)]
    for bricks in product(subsets, repeat=r):
        if set().union(*bricks) != full:
            continue
        edges = [(a, b) for a, b in combinations(range(r), 2) if bricks[a] & bricks[b]]
        for dirs in product((0, 1), repeat=len(edges)):
            gen = [(a, b) if d else (b, a) for d, (a, b) in zip(dirs, edges)]
            rel = closure(gen, r)
            if rel is not None:
                yield bricks, frozenset(rel)


def orbit_key(bricks, rel):
    """Smallest encoding over all relabellings of the bricks."""
    r = len(bricks)
    best = None
    for perm in permutations(range(r)):
        pos = {old: new for new, old in enumerate(perm)}
        enc = (tuple(tuple(sorted(bricks[i])) for i in perm), tuple(sorted((pos[a], pos[b]) for a, b in rel)))
        if best is None or enc < best:
            best = enc
    return best


def walls_by_orbits(n, r):
    return {orbit_key(b, rel) for b, rel in ordered_walls(n, r)}


def connected(bricks, rel):
    """Bricks linked when they meet and one covers the other."""
    r = len(bricks)
    adj = {i: set() for i in range(r)}
    for a, b in covers(rel, r):
        if set(bricks[a]) & set(bricks[b]):
            adj[a].add(b)
            adj[b].add(a)
    seen, todo = {0}, [0]
    while todo:
        x = todo.pop()
        for y in adj[x] - seen:
            seen.add(y)
            todo.append(y)
    return len(seen) == r


def xconn(n):
    parts = set_partitions(range(1, n + 1))
    out = []
    for i in parts:
        for j in parts:
            # bipartite graph of blocks, edges when they meet
            nodes = [("i", b) for b in i] + [("j", b) for b in j]
            seen, todo = {nodes[0]}, [nodes[0]]
            while todo:
                s, b = todo.pop()
                other = j if s == "i" else i
                for c in other:
                    node = ("j" if s == "i" else "i", c)
                    if set(b) & set(c) and node not in seen:
                        seen.add(node)
                        todo.append(node)
            if len(seen) == len(nodes):
                out.append((i, j))
    return out


# ------------------------------------------------------------------ smodule


def s_brute(p, n):
    """Sum over set partitions of 1..n of the product of p over block sizes."""
    total = 0
    for blocks in set_partitions(range(1, n + 1)):
        t = 1
        for b in blocks:
            t *= p[len(b) - 1] if len(b) <= len(p) else 0
        total += t
    return total


def boxtimes_brute(p, q, n):
    def d(seq, k):
        return seq[k - 1] if k <= len(seq) else 0

    total = 0
    for i, j in xconn(n):
        t = 1
        for b in i:
            t *= d(p, len(b))
        for b in j:
            t *= d(q, len(b))
        total += t
    return total


def conc_brute(p, q, n):
    """Ordered splittings of 1..n into two nonempty sets."""
    def d(seq, k):
        return seq[k - 1] if k <= len(seq) else 0

    return sum(comb(n, k) * d(p, k) * d(q, n - k) for k in range(1, n))


def connected_perms(alpha, beta):
    n = sum(alpha)
    gin = [g for g, s in enumerate(alpha) for _ in range(s)]
    gout = [g for g, s in enumerate(beta) for _ in range(s)]
    out = []
    for sigma in permutations(range(1, n + 1)):
        nodes = {("in", g) for g in range(len(alpha))} | {("out", g) for g in range(len(beta))}
        edges = [(("in", gin[i]), ("out", gout[s - 1])) for i, s in enumerate(sigma)]
        seen, todo = {("in", 0)}, [("in", 0)]
        while todo:
            x = todo.pop()
            for a, b in edges:
                for u, v in ((a, b), (b, a)):
                    if u == x and v not in seen:
                        seen.add(v)
                        todo.append(v)
        if seen == nodes:
            out.append(sigma)
    return out


# ---------------------------------------------------------------- colouring


def colourings(bricks, rel):
    """Fiber partitions with connected fibers and an acyclic quotient."""
    r = len(bricks)
    out = []
    for fibers in set_partitions(range(r)):
        ok = True
        for f in fibers:
            pos = {x: i for i, x in enumerate(f)}
            sub_rel = {(pos[a], pos[b]) for a, b in rel if a in pos and b in pos}
            if not connected([bricks[x] for x in f], sub_rel):
                ok = False
                break
        if not ok:
            continue
        where = {x: c for c, f in enumerate(fibers) for x in f}
        q = {(where[a], where[b]) for a, b in rel if where[a] != where[b]}
        if closure(q, len(fibers)) is None:
            continue
        out.append(fibers)
    return out
