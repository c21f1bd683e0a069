"""Independent verification of topology witnesses.

Nothing here calls the builder.  Classes, levels, pushforwards,
T-relatedness and orders are all re-derived from the raw map, so a witness
that passes has been checked against ``T`` itself rather than against the
code that produced it.

Rule ids:

``a``  addresses are total, unique and point at the right slot
``b``  class/level structure and atomization match ``T``
``c``  every atom is carried onto an atom, monotonically, fibers contiguous
``d``  every atom carries a finite order with a last element (compactness)
``e``  continuity at ``x*`` (tail schema and branch-preimage certificates)
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Hashable

from .chains import ShapeMismatch
from .partitions import Partition
from .system import STAR, RayPresentation, SelfmapSystem, ray_index, ray_node

RULE_ADDRESS = "a"
RULE_STRUCTURE = "b"
RULE_ORDER = "c"
RULE_COMPACT = "d"
RULE_CONTINUITY = "e"

_STAR_ADDRESS = (-1, -1, -1, -1, -1)


class CertificateFailure(Exception):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(f"[{v.rule}] {v.location}: {v.description}" for v in violations))


@dataclass(frozen=True)
class Violation:
    location: str
    rule: str
    description: str


@dataclass(frozen=True)
class CheckReport:
    violations: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def require(self) -> "CheckReport":
        if self.violations:
            raise CertificateFailure(self.violations)
        return self


class _Log:
    def __init__(self):
        self.items: list[Violation] = []

    def __call__(self, location: str, rule: str, description: str) -> None:
        self.items.append(Violation(location, rule, description))

    def report(self) -> CheckReport:
        return CheckReport(tuple(self.items))


def _group_by(keys: dict) -> dict:
    out: dict = defaultdict(set)
    for x, k in keys.items():
        out[k].add(x)
    return out


def _check_chain(cw, image: Callable[[Hashable], Hashable], loc: str, log: _Log) -> None:
    """Rules b, c, d for one chain witness, with ``image`` taken from the system."""
    levels = cw.chain.levels
    N = len(levels)
    pis, lams = cw.atomization.pis, cw.atomization.lambdas
    if len(pis) != N or len(lams) != N:
        log(loc, RULE_STRUCTURE, f"{N} levels but {len(pis)} pis / {len(lams)} lambdas")
        return
    for n in range(N):
        if pis[n].ground != levels[n] or lams[n].ground != levels[n]:
            log(f"{loc}/level{n}", RULE_STRUCTURE, "partition does not cover its level")
            return
        for x, y in cw.chain.maps[n - 1].table.items() if n else ():
            if image(x) != y:
                log(f"{loc}/level{n}", RULE_STRUCTURE, f"map table sends {x!r} to {y!r}, T sends it to {image(x)!r}")
    sound = True
    if pis[N - 1].blocks != (levels[N - 1],):
        log(f"{loc}/level{N - 1}", RULE_STRUCTURE, "top pi is not the whole level")
        sound = False
    for n in range(N - 1, 0, -1):
        hit = {y: set() for y in levels[n - 1]}
        for x in levels[n]:
            hit[image(x)].add(pis[n].block_of[x])
        expect = Partition(_group_by({y: frozenset(h) for y, h in hit.items()}).values())
        if expect != pis[n - 1]:
            log(f"{loc}/level{n - 1}", RULE_STRUCTURE, "pi is not the pushforward of the level above")
            sound = False
    for n in range(N):
        home = pis[n].block_of
        for b in lams[n].blocks:
            if len({home[x] for x in b}) != 1:
                log(f"{loc}/level{n}", RULE_STRUCTURE, f"lambda block {sorted(b)!r} straddles pi blocks")
                sound = False
                break
    for n in range(1, N):
        below = lams[n - 1]
        for b in lams[n].blocks:
            img = frozenset(image(x) for x in b)
            if below.block(next(iter(img))) != img:
                log(f"{loc}/level{n}", RULE_STRUCTURE, f"block {sorted(b)!r} is not mapped onto an atom")
                sound = False

    orders = cw.orders
    if len(orders) != N:
        log(loc, RULE_COMPACT, f"{len(orders)} order levels for {N} levels")
        return
    ok_order: set = set()
    for n in range(N):
        blocks = lams[n].blocks
        if len(orders[n]) != len(blocks):
            log(f"{loc}/level{n}", RULE_COMPACT, f"{len(orders[n])} orders for {len(blocks)} atoms")
            continue
        for i, (order, b) in enumerate(zip(orders[n], blocks)):
            seq = tuple(order.sequence)
            if order.atom != b:
                log(f"{loc}/level{n}/atom{i}", RULE_COMPACT, "order is attached to the wrong atom")
            elif not seq or len(seq) != len(b) or set(seq) != b:
                log(f"{loc}/level{n}/atom{i}", RULE_COMPACT, "order is not a finite listing of the atom with a last element")
            else:
                ok_order.add((n, i))

    if not sound:
        return
    if len(cw.lex) != N - 1:
        log(loc, RULE_ORDER, f"{len(cw.lex)} lex certificates for {N - 1} level maps")
        return
    for n in range(1, N):
        below = lams[n - 1]
        cert = cw.lex[n - 1]
        for i, b in enumerate(lams[n].blocks):
            if (n, i) not in ok_order:
                continue
            seq = orders[n][i].sequence
            j = below.block_of[image(seq[0])]
            if (n - 1, j) not in ok_order:
                continue
            base = orders[n - 1][j].sequence
            pos = {y: p for p, y in enumerate(base)}
            runs = []
            for x in seq:
                p = pos[image(x)]
                if not runs or runs[-1] != p:
                    runs.append(p)
            if runs != list(range(len(base))):
                log(f"{loc}/level{n}/atom{i}", RULE_ORDER, "map is not order-preserving onto the image atom (fibers out of order)")
            for x in seq:
                if tuple(cert.get(x, ())) != (j, pos[image(x)]):
                    log(f"{loc}/level{n}/atom{i}", RULE_ORDER, f"lex certificate wrong at {x!r}")
                    break


def _check_addresses(witness, points: set, slots: Callable, log: _Log) -> None:
    addrs = witness.addresses
    keys = set(addrs)
    for x in sorted(points - keys, key=repr):
        log(f"point {x!r}", RULE_ADDRESS, "no address")
    for x in sorted(keys - points, key=repr):
        log(f"point {x!r}", RULE_ADDRESS, "address for a point outside X")
    owners: dict = defaultdict(list)
    for x, a in addrs.items():
        owners[tuple(a)].append(x)
    for a, xs in owners.items():
        if len(xs) > 1:
            log(f"address {a!r}", RULE_ADDRESS, f"shared by {sorted(xs, key=repr)!r}")
    for x, a in addrs.items():
        a = tuple(a)
        if x == witness.star:
            if a != _STAR_ADDRESS:
                log(f"point {x!r}", RULE_ADDRESS, "x* must carry the star address")
            continue
        if slots(a) != x:
            log(f"point {x!r}", RULE_ADDRESS, f"address {a!r} does not hold this point")


def _slot(cw, level: int, atom: int, position: int):
    try:
        if min(level, atom, position) < 0:
            return None
        return cw.orders[level][atom].sequence[position]
    except (IndexError, TypeError):
        return None


def verify_witness(system: SelfmapSystem | RayPresentation, witness) -> CheckReport:
    if isinstance(system, RayPresentation):
        if witness.kind != "ray":
            raise ShapeMismatch("ray presentation needs a ray witness")
        return _verify_ray(system, witness)
    if witness.kind != "finite":
        raise ShapeMismatch("finite system needs a finite witness")
    return _verify_finite(system, witness)


def _verify_finite(system: SelfmapSystem, witness) -> CheckReport:
    log = _Log()
    T = system.map
    star = 0
    for _ in range(system.size):
        star = T[star]
    if T[star] != star:
        log("system", RULE_STRUCTURE, "no fixed point at the end of the orbit of 0")
        return log.report()
    root: dict = {}
    depth: dict = {}
    for x in range(system.size):
        path = []
        cur = x
        while cur != star and cur not in root:
            path.append(cur)
            cur = T[cur]
            if len(path) > system.size:
                log("system", RULE_STRUCTURE, f"orbit of {x} never reaches x*")
                return log.report()
        for p in reversed(path):
            if T[p] == star:
                root[p], depth[p] = p, 0
            else:
                root[p], depth[p] = root[T[p]], depth[T[p]] + 1
    if witness.star != star:
        log("star", RULE_STRUCTURE, f"witness names {witness.star!r}, T fixes {star!r}")

    expected = _group_by(root)
    seen_seeds = set()
    for cid, cw in enumerate(witness.classes):
        loc = f"class{cid}"
        if cw.class_id != cid:
            log(loc, RULE_STRUCTURE, f"class id {cw.class_id} out of sequence")
        if cw.seed not in expected or cw.members != frozenset(expected[cw.seed]):
            log(loc, RULE_STRUCTURE, "members are not a tree of the forest")
            continue
        if cw.kind != "first":
            log(loc, RULE_STRUCTURE, "finite trees are of the first kind")
        seen_seeds.add(cw.seed)
        by_depth = _group_by({x: depth[x] for x in cw.members})
        levels = tuple(frozenset(by_depth[k]) for k in range(len(by_depth)))
        if tuple(cw.chain.chain.levels) != levels:
            log(loc, RULE_STRUCTURE, "levels are not the exact-depth preimages of the root")
            continue
        _check_chain(cw.chain, T.__getitem__, loc, log)
    for seed in sorted(set(expected) - seen_seeds):
        log(f"tree at {seed}", RULE_STRUCTURE, "tree missing from the witness")

    if witness.tail is not None or witness.continuity:
        log("tail", RULE_CONTINUITY, "finite witness carries ray certificates")

    classes = witness.classes

    def slots(a):
        cid, br, lv, at, pos = a
        if not 0 <= cid < len(classes) or br != 0:
            return None
        return _slot(classes[cid].chain, lv, at, pos)

    _check_addresses(witness, set(range(system.size)), slots, log)
    return log.report()


def _ray_owner(ray: RayPresentation) -> dict:
    owner = {ray_node(n): n for n in range(ray.prefix)}
    for n, branch in enumerate(ray.branches):
        for v in branch.nodes:
            owner[v] = n
    return owner


def _verify_ray(ray: RayPresentation, witness) -> CheckReport:
    log = _Log()
    if witness.star != STAR:
        log("star", RULE_STRUCTURE, f"ray witness must name {STAR!r} as x*")
    by_index = {}
    for i, bw in enumerate(witness.branches):
        if bw.index != i:
            log(f"branch{i}", RULE_STRUCTURE, f"branch index {bw.index} out of sequence")
        by_index[bw.index] = bw
    for n in range(ray.prefix):
        loc = f"branch{n}"
        bw = by_index.get(n)
        if bw is None:
            log(loc, RULE_STRUCTURE, "explicit branch missing from the witness")
            continue
        root = ray_node(n)
        depth = {}
        for v in [root, *ray.branches[n].nodes]:
            d, cur = 0, v
            while cur != root:
                cur = ray.image(cur)
                d += 1
            depth[v] = d
        by_depth = _group_by(depth)
        levels = tuple(frozenset(by_depth[k]) for k in range(len(by_depth)))
        if tuple(bw.chain.chain.levels) != levels:
            log(loc, RULE_STRUCTURE, "levels are not the branch sets B_n^k")
            continue
        _check_chain(bw.chain, ray.image, loc, log)
    for n in sorted(set(by_index) - set(range(ray.prefix))):
        log(f"branch{n}", RULE_STRUCTURE, "explicit witness for a tail branch")

    log.items.extend(verify_continuity_at_star(ray, witness).violations)

    def slots(a):
        cid, br, lv, at, pos = a
        if cid != 0 or br not in by_index:
            return None
        return _slot(by_index[br].chain, lv, at, pos)

    _check_addresses(witness, set(ray.explicit_points()), slots, log)
    return log.report()


def verify_continuity_at_star(ray: RayPresentation, witness) -> CheckReport:
    """Check that pulling back a compact set avoiding ``x*`` keeps it compact.

    Compact sets avoiding ``x*`` sit inside finitely many branches ``B_n``.
    It suffices that each ``T^{-1} B_n`` meets only the finitely many branches
    listed in the witness, and that every tail branch is a bare singleton.
    """
    log = _Log()
    R = ray.prefix
    tail = witness.tail
    if tail is None:
        log("tail", RULE_CONTINUITY, "no tail schema")
    else:
        if tail.start != R:
            log("tail", RULE_CONTINUITY, f"tail starts at {tail.start!r}, explicit branches end at {R}")
        if tail.levels != 1 or tail.atom_size != 1:
            log("tail", RULE_CONTINUITY, "tail branches must be single finite atoms {b_n}")

    owner = _ray_owner(ray)
    met: dict = defaultdict(set)
    for x in ray.explicit_points():
        if x == STAR:
            continue
        y = ray.image(x)
        if y == STAR:
            log(f"point {x!r}", RULE_CONTINUITY, "maps into x*, so x* would not be isolated from the class")
            continue
        k = ray_index(y)
        if k is not None and k >= R:
            if ray_index(x) != k - 1:
                log(f"branch{k}", RULE_CONTINUITY, f"tail branch {k} is not bare: {x!r} maps onto it")
            continue
        met[owner[y]].add(owner[x])

    claims: dict = {}
    for entry in witness.continuity:
        if entry.branch in claims:
            log(f"branch{entry.branch}", RULE_CONTINUITY, "duplicate continuity entry")
        claims[entry.branch] = set(entry.covered_by)
    for n in range(R):
        if n not in claims:
            log(f"branch{n}", RULE_CONTINUITY, "no preimage certificate")
        elif not met[n] <= claims[n]:
            log(f"branch{n}", RULE_CONTINUITY,
                f"preimage meets branches {sorted(met[n])}, certificate lists {sorted(claims[n])}")
    for n in sorted(set(claims) - set(range(R))):
        log(f"branch{n}", RULE_CONTINUITY, "certificate for a tail branch; tails are covered by the schema")

    by_index = {bw.index: bw for bw in witness.branches}
    for n in range(R):
        bw = by_index.get(n)
        if bw is None:
            continue
        covered = frozenset().union(*bw.chain.chain.levels)
        expect = frozenset([ray_node(n), *ray.branches[n].nodes])
        if covered != expect:
            log(f"branch{n}", RULE_CONTINUITY, "branch witness does not cover B_n with finitely many atoms")
    return log.report()
