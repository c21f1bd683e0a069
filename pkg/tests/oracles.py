"""Brute-force reference computations, written without touching the package internals."""

from __future__ import annotations

import itertools
import random

from selfmap_compact.chains import Chain


def all_maps(n):
    return itertools.product(range(n), repeat=n)


def cycle_points(table):
    """Points x with T^k x = x for some 1 <= k <= n."""
    n = len(table)
    out = set()
    for x in range(n):
        y = x
        for _ in range(n):
            y = table[y]
            if y == x:
                out.add(x)
                break
    return out


def cycles(table):
    pts = cycle_points(table)
    seen, out = set(), []
    for x in sorted(pts):
        if x in seen:
            continue
        cyc = [x]
        y = table[x]
        while y != x:
            cyc.append(y)
            y = table[y]
        seen.update(cyc)
        out.append(cyc)
    return out


def shrinks_by_cycles(table) -> bool:
    """Unique cycle, and it is a self-loop."""
    cs = cycles(table)
    return len(cs) == 1 and len(cs[0]) == 1


def iterate_images(table, steps):
    img = set(range(len(table)))
    out = [frozenset(img)]
    for _ in range(steps):
        img = {table[x] for x in img}
        out.append(frozenset(img))
    return out


def set_partitions(items):
    """Every partition of ``items`` as a list of lists (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def canon(blocks):
    return sorted(sorted(b) for b in blocks if b)


def hit_set_tabulation(domain, codomain, table, blocks):
    """Pushforward via an explicit incidence matrix: row y, column i is True
    when some x in block i maps to y.  Rows that agree form a block."""
    codomain = sorted(codomain)
    matrix = {y: [False] * len(blocks) for y in codomain}
    for i, b in enumerate(blocks):
        for x in b:
            matrix[table[x]][i] = True
    groups = {}
    for y in codomain:
        groups.setdefault(tuple(matrix[y]), []).append(y)
    return canon(groups.values())


def refinements(blocks):
    """All partitions finer than ``blocks``: partition each block independently."""
    per_block = [list(set_partitions(sorted(b))) for b in blocks]
    for choice in itertools.product(*per_block):
        yield [blk for part in choice for blk in part]


def random_refinement(blocks, rng):
    out = []
    for b in blocks:
        b = list(b)
        k = rng.randint(1, len(b))
        labels = [rng.randrange(k) for _ in b]
        groups = {}
        for x, lab in zip(b, labels):
            groups.setdefault(lab, []).append(x)
        out.extend(groups.values())
    return out


def grand_orbit_closure(table, star):
    """Classes of x ~ y iff T^n x = T^m y != x* for some n, m <= size."""
    n = len(table)
    reach = {}
    for x in range(n):
        if x == star:
            continue
        pts, y = set(), x
        for _ in range(n + 1):
            if y != star:
                pts.add(y)
            y = table[y]
        reach[x] = pts
    pts = sorted(reach)
    # the relation is already an equivalence; still close it transitively
    parent = {x: x for x in pts}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x, y in itertools.combinations(pts, 2):
        if reach[x] & reach[y]:
            parent[find(x)] = find(y)
    groups = {}
    for x in pts:
        groups.setdefault(find(x), []).append(x)
    return canon(groups.values())


def random_chain(rng: random.Random, max_levels=6, max_size=30) -> Chain:
    N = rng.randint(1, max_levels)
    levels, nxt = [], 0
    for _ in range(N):
        k = rng.randint(1, max_size)
        levels.append(list(range(nxt, nxt + k)))
        nxt += k
    tables = []
    for n in range(1, N):
        below = levels[n - 1]
        # sometimes squeeze the image into a few targets so fibers get big
        targets = below if rng.random() < 0.5 else rng.sample(below, rng.randint(1, len(below)))
        tables.append({x: rng.choice(targets) for x in levels[n]})
    return Chain.from_tables(levels, tables)


def exact_depth_levels(table, z):
    """T^{-n} z for n = 0, 1, ...: points whose orbit first hits z at step n."""
    first_hit = {}
    for x in range(len(table)):
        y = x
        for k in range(len(table) + 1):
            if y == z:
                first_hit[x] = k
                break
            y = table[y]
    depth = max(first_hit.values())
    return [sorted(x for x, k in first_hit.items() if k == n) for n in range(depth + 1)]


def order_problems(cw) -> list[str]:
    """All-pairs check of a chain witness's orders: monotone level maps,
    contiguous fibers in base order, a last element everywhere."""
    probs = []
    levels = cw.chain.levels
    pos, atom_of = {}, {}
    for n, row in enumerate(cw.orders):
        for a, order in enumerate(row):
            seq = list(order.sequence)
            if not seq or set(seq) != set(order.atom) or len(seq) != len(order.atom):
                probs.append(f"level {n} atom {a}: no last element / not a listing")
            for p, x in enumerate(seq):
                pos[x], atom_of[x] = p, (n, a)
    for n in range(1, len(levels)):
        t = cw.chain.maps[n - 1]
        for a, order in enumerate(cw.orders[n]):
            seq = order.sequence
            for i in range(len(seq)):
                for j in range(i + 1, len(seq)):
                    if pos[t(seq[i])] > pos[t(seq[j])]:
                        probs.append(f"level {n} atom {a}: {seq[i]} < {seq[j]} but images reversed")
            images = [t(x) for x in seq]
            runs = [y for k, y in enumerate(images) if k == 0 or images[k - 1] != y]
            if len(runs) != len(set(runs)):
                probs.append(f"level {n} atom {a}: a fiber is split")
            base = cw.orders[n - 1][atom_of[images[0]][1]].sequence
            if runs != list(base):
                probs.append(f"level {n} atom {a}: fibers not in base order")
    return probs
