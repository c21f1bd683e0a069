"""Partitions of finite sets and how they move along a map between disjoint sets."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping


class GroundMismatch(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


class InvalidMap(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering ``ground``, ordered by their minima."""

    blocks: tuple[frozenset, ...]
    ground: frozenset = field(init=False)
    block_of: Mapping[Hashable, int] = field(init=False, repr=False, compare=False)

    def __init__(self, blocks: Iterable[Iterable[Hashable]]):
        blks = [frozenset(b) for b in blocks]
        block_of: dict = {}
        for b in blks:
            if not b:
                raise InvalidPartition("empty block")
            for x in b:
                if x in block_of:
                    raise InvalidPartition(f"point {x!r} appears in two blocks")
                block_of[x] = None
        blks.sort(key=min)
        for i, b in enumerate(blks):
            for x in b:
                block_of[x] = i
        object.__setattr__(self, "blocks", tuple(blks))
        object.__setattr__(self, "ground", frozenset(block_of))
        object.__setattr__(self, "block_of", block_of)

    @classmethod
    def whole(cls, ground: Iterable[Hashable]) -> "Partition":
        ground = frozenset(ground)
        return cls([ground] if ground else [])

    @classmethod
    def singletons(cls, ground: Iterable[Hashable]) -> "Partition":
        return cls([x] for x in ground)

    @classmethod
    def from_labels(cls, labels: Mapping[Hashable, Hashable]) -> "Partition":
        """Group points that share a label."""
        groups: dict = defaultdict(list)
        for x, key in labels.items():
            groups[key].append(x)
        return cls(groups.values())

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block(self, x: Hashable) -> frozenset:
        return self.blocks[self.block_of[x]]

    def as_lists(self) -> list[list]:
        return [sorted(b) for b in self.blocks]


@dataclass(frozen=True)
class MapBetween:
    """A total map from ``domain`` into a disjoint ``codomain``."""

    domain: frozenset
    codomain: frozenset
    table: Mapping[Hashable, Hashable]

    def __init__(self, domain, codomain, table: Mapping[Hashable, Hashable]):
        domain = frozenset(domain)
        codomain = frozenset(codomain)
        if domain & codomain:
            raise InvalidMap("domain and codomain must be disjoint")
        if set(table) != domain:
            raise InvalidMap("map must be defined exactly on its domain")
        for x, y in table.items():
            if y not in codomain:
                raise InvalidMap(f"{x!r} maps to {y!r} outside the codomain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "table", dict(table))

    def __call__(self, x: Hashable) -> Hashable:
        return self.table[x]

    def image(self, xs: Iterable[Hashable]) -> frozenset:
        return frozenset(self.table[x] for x in xs)

    def fibers(self) -> dict:
        out: dict = defaultdict(set)
        for x, y in self.table.items():
            out[y].add(x)
        return out

    def restrict(self, domain: Iterable[Hashable], codomain: Iterable[Hashable]) -> "MapBetween":
        domain = frozenset(domain)
        return MapBetween(domain, codomain, {x: self.table[x] for x in domain})


def _same_ground(p1: Partition, p2: Partition) -> None:
    if p1.ground != p2.ground:
        raise GroundMismatch("partitions live on different ground sets")


def refines(fine: Partition, coarse: Partition) -> bool:
    _same_ground(fine, coarse)
    where = coarse.block_of
    for b in fine.blocks:
        it = iter(b)
        home = where[next(it)]
        if any(where[x] != home for x in it):
            return False
    return True


def meet(p1: Partition, p2: Partition) -> Partition:
    """Coarsest common refinement: the nonempty pairwise intersections."""
    _same_ground(p1, p2)
    a, b = p1.block_of, p2.block_of
    return Partition.from_labels({x: (a[x], b[x]) for x in p1.ground})


def preimage_partition(t: MapBetween, lam: Partition) -> Partition:
    if lam.ground != t.codomain:
        raise GroundMismatch("partition is not over the map's codomain")
    where = lam.block_of
    return Partition.from_labels({x: where[y] for x, y in t.table.items()})


def hit_sets(t: MapBetween, pi: Partition) -> dict:
    """For each codomain point, the set of ``pi`` block ids its fiber meets."""
    hits: dict = {y: set() for y in t.codomain}
    where = pi.block_of
    for x, y in t.table.items():
        hits[y].add(where[x])
    return {y: frozenset(h) for y, h in hits.items()}


def pushforward(t: MapBetween, pi: Partition) -> Partition:
    """Group codomain points whose fibers meet the same blocks of ``pi``.

    Points outside the image all have the empty hit-set and share one block.
    """
    if pi.ground != t.domain:
        raise GroundMismatch("partition is not over the map's domain")
    return Partition.from_labels(hit_sets(t, pi))


def is_t_related(t: MapBetween, pi: Partition, lam: Partition) -> bool:
    """Every block of ``pi`` is mapped onto (not just into) a block of ``lam``."""
    if pi.ground != t.domain or lam.ground != t.codomain:
        raise GroundMismatch("partitions do not match the map's domain/codomain")
    for b in pi.blocks:
        img = t.image(b)
        if lam.block(next(iter(img))) != img:
            return False
    return True


def relate(t: MapBetween, pi: Partition, lam: Partition) -> Partition:
    """``T^{-1} lam ∧ pi``, which is T-related to ``lam`` when ``lam`` refines ``T pi``."""
    if pi.ground != t.domain or lam.ground != t.codomain:
        raise GroundMismatch("partitions do not match the map's domain/codomain")
    if not refines(lam, pushforward(t, pi)):
        raise PreconditionViolated("lambda does not refine the pushforward of pi")
    return meet(preimage_partition(t, lam), pi)
