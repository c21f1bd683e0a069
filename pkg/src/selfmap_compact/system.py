"""Finite selfmap systems, finitely presented ray systems, and the shrinking condition.

A finite system is a set ``X = {0, ..., size-1}`` together with a total map
table.  The shrinking condition asks that the nested images ``T^n X`` close
down onto a single point ``x*``; for finite systems this is decided by
iterating image-of-image until it stops changing.

A ray system describes a countable class that never reaches ``x*``: a ray
``b0 -> b1 -> b2 -> ...`` with finite trees hanging off the first ``prefix``
ray nodes and nothing hanging off the rest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

STAR = "*"
_RAY_NODE = re.compile(r"^b(0|[1-9][0-9]*)$")


class InvalidSystem(ValueError):
    """The map table is not a total selfmap."""


class InvalidPresentation(ValueError):
    """A ray presentation breaks one of its structural rules."""


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class SelfmapSystem:
    size: int
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise InvalidSystem(f"size must be a positive integer, got {self.size!r}")
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.size:
            raise InvalidSystem(
                f"map has {len(self.map)} entries but size is {self.size}"
            )
        for i, t in enumerate(self.map):
            if not isinstance(t, int) or isinstance(t, bool) or not 0 <= t < self.size:
                raise InvalidSystem(f"map[{i}] = {t!r} is not an index in [0, {self.size})")

    @classmethod
    def from_list(cls, table: Sequence[int]) -> "SelfmapSystem":
        return cls(len(table), tuple(table))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def points(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class ConditionReport:
    holds: bool
    fixed_point: Hashable | None
    stabilized_at: int
    eventual_image: frozenset


def check_condition(system: SelfmapSystem) -> ConditionReport:
    """Decide whether the nested images of ``system`` shrink to one point.

    ``stabilized_at`` is the first ``n`` (counting ``T^0 X = X``) with
    ``T^n X == T^{n+1} X``.
    """
    table = system.map
    image = frozenset(range(system.size))
    n = 0
    while True:
        nxt = frozenset(table[x] for x in image)
        if nxt == image:
            break
        image = nxt
        n += 1
    holds = len(image) == 1 and table[next(iter(image))] == next(iter(image))
    star = next(iter(image)) if holds else None
    return ConditionReport(holds, star, n, image)


def preimage(system: SelfmapSystem, targets: Iterable[int]) -> frozenset[int]:
    targets = frozenset(targets)
    for t in targets:
        if not isinstance(t, int) or not 0 <= t < system.size:
            raise IndexOutOfRange(f"target {t!r} outside [0, {system.size})")
    return frozenset(x for x, y in enumerate(system.map) if y in targets)


def orbit(system: SelfmapSystem, x: int) -> list[int]:
    """``x, Tx, T^2 x, ...`` cut off just before the first repeated point."""
    if not 0 <= x < system.size:
        raise IndexOutOfRange(f"point {x!r} outside [0, {system.size})")
    seen = set()
    out = []
    while x not in seen:
        seen.add(x)
        out.append(x)
        x = system.map[x]
    return out


def ray_node(n: int) -> str:
    return f"b{n}"


def ray_index(label: str) -> int | None:
    m = _RAY_NODE.match(label)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class BranchTree:
    """Finite tree hanging off one ray node; ``parent`` maps each node to its image."""

    nodes: tuple[str, ...]
    parent: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "parent", dict(self.parent))


@dataclass(frozen=True)
class RayPresentation:
    """A second-kind class given by ``prefix`` explicit branches and a bare tail.

    Points are string labels: ``"*"`` is ``x*``, ``"b<n>"`` is the ray node
    ``T^n a``, anything else is a branch node.  ``T(b_n) = b_{n+1}`` and
    ``T(*) = *`` are implicit.
    """

    prefix: int
    branches: tuple[BranchTree, ...]
    star_included: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", tuple(self.branches))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.prefix, int) or self.prefix < 0:
            raise InvalidPresentation(f"prefix must be a natural number, got {self.prefix!r}")
        if not self.star_included:
            raise InvalidPresentation("star_included must be true")
        if len(self.branches) != self.prefix:
            raise InvalidPresentation(
                f"expected {self.prefix} branches, got {len(self.branches)}"
            )
        owner: dict[str, int] = {}
        for n, branch in enumerate(self.branches):
            for node in branch.nodes:
                if node == STAR or ray_index(node) is not None:
                    raise InvalidPresentation(f"branch {n}: reserved label {node!r}")
                if node in owner:
                    raise InvalidPresentation(
                        f"branch {n}: node {node!r} already belongs to branch {owner[node]}"
                    )
                owner[node] = n
            if set(branch.parent) != set(branch.nodes):
                raise InvalidPresentation(f"branch {n}: parent table must cover exactly its nodes")
        for n, branch in enumerate(self.branches):
            root = ray_node(n)
            for node, par in branch.parent.items():
                if par == STAR:
                    raise InvalidPresentation(f"branch {n}: node {node!r} maps into x*")
                if par == root:
                    continue
                if ray_index(par) is not None:
                    raise InvalidPresentation(
                        f"branch {n}: node {node!r} attaches to {par!r}, not its root {root!r}"
                    )
                if owner.get(par) != n:
                    raise InvalidPresentation(
                        f"branch {n}: node {node!r} maps to {par!r} outside the branch"
                    )
            # every node must reach the root in finitely many steps
            for node in branch.nodes:
                seen = set()
                cur = node
                while cur != root:
                    if cur in seen:
                        raise InvalidPresentation(f"branch {n}: cycle through {node!r}")
                    seen.add(cur)
                    cur = branch.parent[cur]

    def image(self, label: str) -> str:
        if label == STAR:
            return STAR
        k = ray_index(label)
        if k is not None:
            return ray_node(k + 1)
        for branch in self.branches:
            if label in branch.parent:
                return branch.parent[label]
        raise IndexOutOfRange(f"unknown point {label!r}")

    def depth(self, n: int, node: str) -> int:
        root = ray_node(n)
        d = 0
        while node != root:
            node = self.branches[n].parent[node]
            d += 1
        return d

    def branch_depth(self, n: int) -> int:
        if n >= self.prefix:
            return 0
        return max((self.depth(n, v) for v in self.branches[n].nodes), default=0)

    def explicit_points(self) -> list[str]:
        """``x*``, the explicit ray nodes and all branch nodes."""
        pts = [STAR] + [ray_node(n) for n in range(self.prefix)]
        for branch in self.branches:
            pts.extend(branch.nodes)
        return pts


def check_condition_ray(ray: RayPresentation) -> ConditionReport:
    """Shrinking condition for a ray presentation.

    Validity already forces it: every branch is finite and the tail is bare,
    so ``T^n X`` keeps only ``x*`` and ray nodes shifted ever further out.
    ``stabilized_at`` reports ``max branch depth + prefix``.
    """
    ray.validate()
    depth = max((ray.branch_depth(n) for n in range(ray.prefix)), default=0)
    return ConditionReport(True, STAR, depth + ray.prefix, frozenset({STAR}))
