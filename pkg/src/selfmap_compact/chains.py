"""Finite chains of sets ``X_1 <- X_2 <- ... <- X_N`` and their atomization.

Level ``n`` (1-based in the math, ``levels[n-1]`` here) maps into level
``n-1`` by ``maps[n-2]``.  Atomizing a chain finds finite partitions
``lambda_n`` such that every block of ``lambda_n`` is carried onto a block of
``lambda_{n-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .partitions import (
    GroundMismatch,
    MapBetween,
    Partition,
    is_t_related,
    pushforward,
    refines,
    relate,
)


class InvalidChain(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Chain:
    levels: tuple[frozenset, ...]
    maps: tuple[MapBetween, ...]

    def __init__(self, levels: Sequence, maps: Sequence[MapBetween]):
        levels = tuple(frozenset(lv) for lv in levels)
        maps = tuple(maps)
        if not levels:
            raise InvalidChain("a chain needs at least one level")
        if any(not lv for lv in levels):
            raise InvalidChain("empty level")
        seen: set = set()
        for lv in levels:
            if seen & lv:
                raise InvalidChain("levels must be pairwise disjoint")
            seen |= lv
        if len(maps) != len(levels) - 1:
            raise InvalidChain(f"{len(levels)} levels need {len(levels) - 1} maps, got {len(maps)}")
        for n, t in enumerate(maps):
            if t.domain != levels[n + 1] or t.codomain != levels[n]:
                raise InvalidChain(f"map {n + 2} does not go from level {n + 2} to level {n + 1}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "maps", maps)

    @classmethod
    def from_tables(cls, levels: Sequence, tables: Sequence[Mapping[Hashable, Hashable]]) -> "Chain":
        levels = [frozenset(lv) for lv in levels]
        maps = [MapBetween(levels[n + 1], levels[n], tables[n]) for n in range(len(tables))]
        return cls(levels, maps)

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class Atomization:
    pis: tuple[Partition, ...]
    lambdas: tuple[Partition, ...]


def atomize_chain(chain: Chain) -> Atomization:
    """Backward pass of pushforwards from the top level, then a forward relate pass."""
    N = len(chain)
    pis: list[Partition] = [None] * N  # type: ignore[list-item]
    pis[N - 1] = Partition.whole(chain.levels[N - 1])
    for n in range(N - 1, 0, -1):
        pis[n - 1] = pushforward(chain.maps[n - 1], pis[n])
    lambdas = [pis[0]]
    for n in range(1, N):
        lambdas.append(relate(chain.maps[n - 1], pis[n], lambdas[n - 1]))
    return Atomization(tuple(pis), tuple(lambdas))


def verify_atomization(chain: Chain, atom: Atomization) -> bool:
    N = len(chain)
    if len(atom.pis) != N or len(atom.lambdas) != N:
        raise ShapeMismatch(f"chain has {N} levels, atomization has {len(atom.pis)}/{len(atom.lambdas)}")
    try:
        for n in range(N):
            lv = chain.levels[n]
            if atom.pis[n].ground != lv or atom.lambdas[n].ground != lv:
                return False
            if not refines(atom.lambdas[n], atom.pis[n]):
                return False
        if atom.pis[N - 1] != Partition.whole(chain.levels[N - 1]):
            return False
        for n in range(1, N):
            t = chain.maps[n - 1]
            if pushforward(t, atom.pis[n]) != atom.pis[n - 1]:
                return False
            if not is_t_related(t, atom.lambdas[n], atom.lambdas[n - 1]):
                return False
    except GroundMismatch:
        return False
    return True
