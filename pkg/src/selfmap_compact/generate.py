"""Seeded random shrinking systems.

Point 0 is the fixed point and every other point ``i`` maps somewhere in
``[0, i)``, so the only cycle is the loop at 0 and the shrinking condition
holds by construction.  The shape only biases which earlier point is picked.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .system import SelfmapSystem


class Shape(str, enum.Enum):
    UNIFORM = "uniform"
    DEEP_CHAIN = "deep-chain"
    WIDE_FAN = "wide-fan"


@dataclass(frozen=True)
class GeneratorConfig:
    size: int
    seed: int = 0
    shape: Shape = Shape.UNIFORM

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "shape", Shape(self.shape))


def _parent(i: int, shape: Shape, rng: random.Random) -> int:
    if shape is Shape.UNIFORM:
        return rng.randrange(i)
    u = rng.random()
    if shape is Shape.DEEP_CHAIN:
        # mostly the previous point, giving long thin trees
        return i - 1 - int(i * u**6)
    # mostly small indices, giving wide shallow fans
    return int(i * u**4)


def gen_system(config: GeneratorConfig) -> SelfmapSystem:
    rng = random.Random(config.seed)
    table = [0] * config.size
    for i in range(1, config.size):
        table[i] = _parent(i, config.shape, rng)
    return SelfmapSystem(config.size, tuple(table))
