"""Well-orders on atoms and their lexicographic lift along a chain.

A finite total order is a well-order with a last element, so its order
topology is compact Hausdorff (discrete, at this scale).  What can actually
be checked on finite data is the order structure: every level map is
monotone and its fibers sit in contiguous runs following the base order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .chains import Atomization, Chain, verify_atomization
from .partitions import MapBetween


class EmptyAtom(ValueError):
    pass


class NotOnto(ValueError):
    pass


class AtomizationInvalid(ValueError):
    pass


@dataclass(frozen=True)
class AtomOrder:
    """``sequence`` lists ``atom`` first to last.  Not validated here; the checker does that."""

    atom: frozenset
    sequence: tuple

    @property
    def last(self) -> Hashable:
        return self.sequence[-1]

    def position(self) -> dict:
        return {x: i for i, x in enumerate(self.sequence)}


def wo_order(atom: Iterable[Hashable], rng: random.Random | None = None) -> AtomOrder:
    """Ascending order by point, or a seeded shuffle of it when ``rng`` is given."""
    atom = frozenset(atom)
    if not atom:
        raise EmptyAtom("cannot order an empty atom")
    seq = sorted(atom)
    if rng is not None:
        rng.shuffle(seq)
    return AtomOrder(atom, tuple(seq))


def lift_order(
    t: MapBetween, base: AtomOrder, rng: random.Random | None = None
) -> AtomOrder:
    """Order ``t.domain`` by (position of image in ``base``, order inside the fiber)."""
    if t.image(t.domain) != base.atom:
        raise NotOnto("map does not carry the domain atom onto the base atom")
    fibers = t.fibers()
    seq: list = []
    for y in base.sequence:
        seq.extend(wo_order(fibers[y], rng).sequence)
    return AtomOrder(frozenset(t.domain), tuple(seq))


@dataclass(frozen=True)
class ChainWitness:
    """Atomization plus one order per atom.

    ``orders[n][i]`` orders block ``i`` of ``lambdas[n]``.  ``lex[n-1]`` (for
    levels ``n >= 1``, 0-based) records, for each point, the id of the atom
    holding its image and the image's position there.
    """

    chain: Chain
    atomization: Atomization
    orders: tuple[tuple[AtomOrder, ...], ...]
    lex: tuple[Mapping[Hashable, tuple[int, int]], ...]

    def positions(self) -> dict:
        """point -> (level, atom id, position), all 0-based."""
        out = {}
        for n, level_orders in enumerate(self.orders):
            for a, order in enumerate(level_orders):
                for p, x in enumerate(order.sequence):
                    out[x] = (n, a, p)
        return out


def compactify_chain(
    chain: Chain, atom: Atomization, rng: random.Random | None = None
) -> ChainWitness:
    if not verify_atomization(chain, atom):
        raise AtomizationInvalid("atomization does not atomize this chain")
    lambdas = atom.lambdas
    orders: list[tuple[AtomOrder, ...]] = [tuple(wo_order(b, rng) for b in lambdas[0].blocks)]
    lex = []
    for n in range(1, len(chain)):
        t = chain.maps[n - 1]
        below = lambdas[n - 1]
        level_orders = []
        cert = {}
        for block in lambdas[n].blocks:
            target = below.block_of[t(next(iter(block)))]
            base = orders[n - 1][target]
            level_orders.append(lift_order(t.restrict(block, base.atom), base, rng))
            pos = base.position()
            for x in block:
                cert[x] = (target, pos[t(x)])
        orders.append(tuple(level_orders))
        lex.append(cert)
    return ChainWitness(chain, atom, tuple(orders), tuple(lex))
