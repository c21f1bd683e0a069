"""Split a shrinking selfmap into trees, atomize each, and assemble a topology witness.

Removing ``x*`` leaves a forest.  Two points lie in the same tree when their
forward orbits meet before reaching ``x*``.  A tree that touches ``x*`` (first
kind) is the finite union of the exact-depth preimages ``T^{-n} z`` of its
root ``z``.  A tree that never reaches ``x*`` (second kind, only in ray
presentations) is the union of branches ``B_n`` hanging off its ray.

Every tree or branch becomes a chain, gets atomized and ordered, and the
result is bundled with per-point addresses.  Adding ``x*`` back as the point
at infinity compactifies the whole thing.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Mapping, NamedTuple

from .chains import Chain, atomize_chain
from .orders import ChainWitness, compactify_chain
from .system import (
    STAR,
    RayPresentation,
    SelfmapSystem,
    check_condition,
    ray_node,
)

FIRST = "first"
SECOND = "second"


class ConditionFails(ValueError):
    pass


class NotFirstKind(ValueError):
    pass


@dataclass(frozen=True)
class TreeClass:
    members: frozenset
    kind: str
    seed: Hashable


@dataclass(frozen=True)
class ClassDecomposition:
    star: Hashable
    classes: tuple[TreeClass, ...]


class _DisjointSets:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def decompose(system: SelfmapSystem) -> ClassDecomposition:
    report = check_condition(system)
    if not report.holds:
        raise ConditionFails("the images of T do not shrink to a single fixed point")
    star = report.fixed_point
    table = system.map
    rest = [x for x in range(system.size) if x != star]
    ds = _DisjointSets(rest)
    for x in rest:
        if table[x] != star:
            ds.union(x, table[x])
    groups: dict = defaultdict(list)
    for x in rest:
        groups[ds.find(x)].append(x)
    classes = []
    for members in sorted(groups.values(), key=min):
        roots = [x for x in members if table[x] == star]
        if roots:
            classes.append(TreeClass(frozenset(members), FIRST, min(roots)))
        else:
            # unreachable for finite systems: a tree missing x* would hold a cycle
            classes.append(TreeClass(frozenset(members), SECOND, min(members)))
    return ClassDecomposition(star, tuple(classes))


def _fibers(system: SelfmapSystem) -> dict:
    out: dict = defaultdict(list)
    for x, y in enumerate(system.map):
        out[y].append(x)
    return out


def first_kind_chain(system: SelfmapSystem, cls: TreeClass, fibers: Mapping | None = None) -> Chain:
    """Levels ``{z}, T^{-1}z, T^{-2}z, ...`` up to the first empty one."""
    if cls.kind != FIRST:
        raise NotFirstKind(f"class seeded at {cls.seed!r} is not of the first kind")
    if fibers is None:
        fibers = _fibers(system)
    table = system.map
    levels = [[cls.seed]]
    while True:
        nxt = [x for y in levels[-1] for x in fibers.get(y, ())]
        if not nxt:
            break
        levels.append(nxt)
    tables = [{x: table[x] for x in levels[n + 1]} for n in range(len(levels) - 1)]
    return Chain.from_tables(levels, tables)


@dataclass(frozen=True)
class BranchStructure:
    """Branch ``B_n`` split into ``B_n^k``, the points ``k`` steps above ``b_n``."""

    ray_index: int
    level_sets: tuple[frozenset, ...]
    chain: Chain


def second_kind_branches(ray: RayPresentation) -> list[BranchStructure]:
    """Explicit branches ``B_0 ... B_{R-1}``; past ``R`` every branch is just ``{b_n}``."""
    ray.validate()
    out = []
    for n, branch in enumerate(ray.branches):
        by_depth: dict[int, list] = defaultdict(list)
        by_depth[0].append(ray_node(n))
        for v in branch.nodes:
            by_depth[ray.depth(n, v)].append(v)
        levels = [by_depth[k] for k in range(len(by_depth))]
        tables = [{x: branch.parent[x] for x in levels[k + 1]} for k in range(len(levels) - 1)]
        chain = Chain.from_tables(levels, tables)
        out.append(BranchStructure(n, chain.levels, chain))
    return out


class Address(NamedTuple):
    class_id: int
    branch: int
    level: int
    atom: int
    position: int


STAR_ADDRESS = Address(-1, -1, -1, -1, -1)


@dataclass(frozen=True)
class ClassWitness:
    class_id: int
    kind: str
    seed: Hashable
    members: frozenset
    chain: ChainWitness


@dataclass(frozen=True)
class BranchWitness:
    index: int
    chain: ChainWitness


@dataclass(frozen=True)
class TailSchema:
    """Every branch from ``start`` on is the single point ``b_n``: one level, one atom of size 1."""

    start: int
    levels: int = 1
    atom_size: int | None = 1


@dataclass(frozen=True)
class ContinuityEntry:
    """``T^{-1} B_branch`` lies inside the union of ``B_m`` for ``m`` in ``covered_by``."""

    branch: int
    covered_by: tuple[int, ...]


@dataclass(frozen=True)
class TopologyWitness:
    kind: str  # "finite" or "ray"
    star: Hashable
    classes: tuple[ClassWitness, ...] = ()
    branches: tuple[BranchWitness, ...] = ()
    tail: TailSchema | None = None
    continuity: tuple[ContinuityEntry, ...] = ()
    addresses: Mapping[Hashable, Address] = field(default_factory=dict)


def _witness_chain(chain: Chain, rng: random.Random | None) -> ChainWitness:
    return compactify_chain(chain, atomize_chain(chain), rng)


def build_witness(
    system: SelfmapSystem | RayPresentation, order_seed: int | None = None
) -> TopologyWitness:
    """Run decomposition, atomization and ordering; bundle everything for the checker.

    ``order_seed`` swaps the ascending well-orders for seeded shuffles.
    """
    rng = random.Random(order_seed) if order_seed is not None else None
    if isinstance(system, RayPresentation):
        return _build_ray_witness(system, rng)
    dec = decompose(system)
    fibers = _fibers(system)
    addresses = {dec.star: STAR_ADDRESS}
    classes = []
    for cid, cls in enumerate(dec.classes):
        cw = _witness_chain(first_kind_chain(system, cls, fibers), rng)
        for x, (n, a, p) in cw.positions().items():
            addresses[x] = Address(cid, 0, n, a, p)
        classes.append(ClassWitness(cid, cls.kind, cls.seed, cls.members, cw))
    return TopologyWitness("finite", dec.star, tuple(classes), addresses=addresses)


def _build_ray_witness(ray: RayPresentation, rng: random.Random | None) -> TopologyWitness:
    addresses = {STAR: STAR_ADDRESS}
    branches = []
    continuity = []
    for bs in second_kind_branches(ray):
        cw = _witness_chain(bs.chain, rng)
        for x, (k, a, p) in cw.positions().items():
            addresses[x] = Address(0, bs.ray_index, k, a, p)
        branches.append(BranchWitness(bs.ray_index, cw))
        n = bs.ray_index
        # T^{-1} b_n picks up b_{n-1}; everything else pulled back stays in B_n
        continuity.append(ContinuityEntry(n, (n - 1, n) if n > 0 else (n,)))
    return TopologyWitness(
        "ray",
        STAR,
        branches=tuple(branches),
        tail=TailSchema(ray.prefix),
        continuity=tuple(continuity),
        addresses=addresses,
    )

