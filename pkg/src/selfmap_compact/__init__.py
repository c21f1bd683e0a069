"""Compact Hausdorff topologies making a shrinking selfmap continuous, with checkable witnesses."""

from .chains import Atomization, Chain, atomize_chain, verify_atomization
from .checker import CheckReport, verify_continuity_at_star, verify_witness
from .forest import build_witness, decompose, first_kind_chain, second_kind_branches
from .orders import AtomOrder, ChainWitness, compactify_chain, lift_order, wo_order
from .partitions import (
    MapBetween,
    Partition,
    is_t_related,
    meet,
    preimage_partition,
    pushforward,
    refines,
    relate,
)
from .system import (
    BranchTree,
    ConditionReport,
    RayPresentation,
    SelfmapSystem,
    check_condition,
    check_condition_ray,
    orbit,
    preimage,
)
