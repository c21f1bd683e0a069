"""JSON forms of systems, partitions, witnesses and reports.

Instance files hold either a finite system::

    {"size": 4, "map": [0, 0, 0, 1]}

or a ray presentation, one branch per explicit ray node ``b0 .. b<prefix-1>``::

    {"ray": {"prefix": 2,
             "branches": [{"nodes": [], "parent": {}},
                          {"nodes": ["c"], "parent": {"c": "b1"}}]}}

Branch node names are free-form strings except ``"*"`` and ``b<digits>``.
Each ``parent`` value is another node of the same branch or the branch's own
ray node.
"""

from __future__ import annotations

import json
from typing import Any

from .chains import Atomization, Chain, InvalidChain
from .checker import CheckReport
from .forest import (
    Address,
    BranchWitness,
    ClassDecomposition,
    ClassWitness,
    ContinuityEntry,
    TailSchema,
    TopologyWitness,
)
from .orders import AtomOrder, ChainWitness
from .partitions import InvalidMap, InvalidPartition, Partition
from .system import (
    BranchTree,
    ConditionReport,
    InvalidPresentation,
    RayPresentation,
    SelfmapSystem,
)


class ParseError(ValueError):
    """Malformed instance or witness; ``where`` names the offending field."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


def _sorted(xs) -> list:
    return sorted(xs)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- instances -------------------------------------------------------------


def system_to_json(system: SelfmapSystem) -> dict:
    return {"size": system.size, "map": list(system.map)}


def ray_to_json(ray: RayPresentation) -> dict:
    return {
        "ray": {
            "prefix": ray.prefix,
            "branches": [
                {"nodes": list(b.nodes), "parent": dict(b.parent)} for b in ray.branches
            ],
        }
    }


def instance_to_json(inst: SelfmapSystem | RayPresentation) -> dict:
    if isinstance(inst, RayPresentation):
        return ray_to_json(inst)
    return system_to_json(inst)


def _system_from_json(data: dict) -> SelfmapSystem:
    size = data.get("size")
    table = data.get("map")
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise ParseError("size", f"expected a positive integer, got {size!r}")
    if not isinstance(table, list):
        raise ParseError("map", f"expected a list, got {type(table).__name__}")
    if len(table) != size:
        raise ParseError("map", f"has {len(table)} entries, size is {size}")
    for i, t in enumerate(table):
        if not isinstance(t, int) or isinstance(t, bool) or not 0 <= t < size:
            raise ParseError(f"map[{i}]", f"{t!r} is not an index in [0, {size})")
    return SelfmapSystem(size, tuple(table))


def _ray_from_json(data: Any) -> RayPresentation:
    if not isinstance(data, dict):
        raise ParseError("ray", "expected an object")
    prefix = data.get("prefix")
    branches = data.get("branches", [])
    if not isinstance(prefix, int) or isinstance(prefix, bool):
        raise ParseError("ray.prefix", f"expected a natural number, got {prefix!r}")
    if not isinstance(branches, list):
        raise ParseError("ray.branches", "expected a list")
    trees = []
    for n, b in enumerate(branches):
        where = f"ray.branches[{n}]"
        if not isinstance(b, dict):
            raise ParseError(where, "expected an object")
        nodes = b.get("nodes", [])
        parent = b.get("parent", {})
        if not isinstance(nodes, list) or not all(isinstance(v, str) for v in nodes):
            raise ParseError(f"{where}.nodes", "expected a list of strings")
        if not isinstance(parent, dict) or not all(isinstance(v, str) for v in parent.values()):
            raise ParseError(f"{where}.parent", "expected an object of strings")
        trees.append(BranchTree(tuple(nodes), parent))
    try:
        return RayPresentation(prefix, tuple(trees), bool(data.get("star_included", True)))
    except InvalidPresentation as exc:
        raise ParseError("ray", str(exc)) from exc


def instance_from_json(data: Any) -> SelfmapSystem | RayPresentation:
    if not isinstance(data, dict):
        raise ParseError("$", "expected a JSON object")
    if "ray" in data:
        return _ray_from_json(data["ray"])
    return _system_from_json(data)


def loads_instance(text: str) -> SelfmapSystem | RayPresentation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return instance_from_json(data)


def load_instance(path) -> SelfmapSystem | RayPresentation:
    with open(path) as fh:
        return loads_instance(fh.read())


# --- reports ---------------------------------------------------------------


def condition_to_json(rep: ConditionReport) -> dict:
    return {
        "holds": rep.holds,
        "fixed_point": rep.fixed_point,
        "stabilized_at": rep.stabilized_at,
        "eventual_image": _sorted(rep.eventual_image),
    }


def decomposition_to_json(dec: ClassDecomposition) -> dict:
    return {
        "star": dec.star,
        "classes": [
            {"id": i, "kind": c.kind, "seed": c.seed, "members": _sorted(c.members)}
            for i, c in enumerate(dec.classes)
        ],
    }


def check_to_json(rep: CheckReport) -> dict:
    return {
        "passed": rep.passed,
        "violations": [
            {"location": v.location, "rule": v.rule, "description": v.description}
            for v in rep.violations
        ],
    }


# --- partitions and chains -------------------------------------------------


def partition_to_json(p: Partition) -> list:
    return p.as_lists()


def partition_from_json(data: Any, where: str = "partition") -> Partition:
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise ParseError(where, "expected a list of blocks")
    try:
        return Partition(data)
    except (InvalidPartition, TypeError) as exc:
        raise ParseError(where, str(exc)) from exc


def atomization_to_json(atom: Atomization) -> dict:
    return {
        "pis": [partition_to_json(p) for p in atom.pis],
        "lambdas": [partition_to_json(p) for p in atom.lambdas],
    }


def chain_witness_to_json(cw: ChainWitness) -> dict:
    return {
        "levels": [_sorted(lv) for lv in cw.chain.levels],
        "maps": [sorted([x, y] for x, y in t.table.items()) for t in cw.chain.maps],
        **atomization_to_json(cw.atomization),
        "orders": [[list(o.sequence) for o in level] for level in cw.orders],
        "lex": [sorted([x, list(v)] for x, v in cert.items()) for cert in cw.lex],
    }


def chain_witness_from_json(data: Any, where: str) -> ChainWitness:
    if not isinstance(data, dict):
        raise ParseError(where, "expected an object")
    try:
        levels = data["levels"]
        chain = Chain.from_tables(levels, [{x: y for x, y in pairs} for pairs in data["maps"]])
        pis = tuple(partition_from_json(p, f"{where}.pis[{i}]") for i, p in enumerate(data["pis"]))
        lams = tuple(
            partition_from_json(p, f"{where}.lambdas[{i}]") for i, p in enumerate(data["lambdas"])
        )
        orders = []
        for n, level in enumerate(data["orders"]):
            blocks = lams[n].blocks if n < len(lams) else ()
            row = []
            for i, seq in enumerate(level):
                atom = blocks[i] if i < len(blocks) else frozenset(seq)
                row.append(AtomOrder(atom, tuple(seq)))
            orders.append(tuple(row))
        lex = tuple({x: tuple(v) for x, v in cert} for cert in data["lex"])
    except (KeyError, TypeError, ValueError, InvalidChain, InvalidMap) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(where, f"malformed chain witness ({exc})") from exc
    return ChainWitness(chain, Atomization(pis, lams), tuple(orders), lex)


# --- witnesses -------------------------------------------------------------


def witness_to_json(w: TopologyWitness) -> dict:
    return {
        "kind": w.kind,
        "star": w.star,
        "classes": [
            {
                "id": c.class_id,
                "kind": c.kind,
                "seed": c.seed,
                "members": _sorted(c.members),
                "chain": chain_witness_to_json(c.chain),
            }
            for c in w.classes
        ],
        "branches": [
            {"index": b.index, "chain": chain_witness_to_json(b.chain)} for b in w.branches
        ],
        "tail": None
        if w.tail is None
        else {"start": w.tail.start, "levels": w.tail.levels, "atom_size": w.tail.atom_size},
        "continuity": [
            {"branch": e.branch, "covered_by": list(e.covered_by)} for e in w.continuity
        ],
        "addresses": sorted([x, list(a)] for x, a in w.addresses.items()),
    }


def witness_from_json(data: Any) -> TopologyWitness:
    if not isinstance(data, dict):
        raise ParseError("witness", "expected an object")
    try:
        classes = tuple(
            ClassWitness(
                c["id"],
                c["kind"],
                c["seed"],
                frozenset(c["members"]),
                chain_witness_from_json(c["chain"], f"classes[{i}].chain"),
            )
            for i, c in enumerate(data.get("classes", []))
        )
        branches = tuple(
            BranchWitness(b["index"], chain_witness_from_json(b["chain"], f"branches[{i}].chain"))
            for i, b in enumerate(data.get("branches", []))
        )
        tail = data.get("tail")
        tail = None if tail is None else TailSchema(tail["start"], tail["levels"], tail["atom_size"])
        continuity = tuple(
            ContinuityEntry(e["branch"], tuple(e["covered_by"])) for e in data.get("continuity", [])
        )
        addresses = {x: Address(*a) for x, a in data["addresses"]}
        return TopologyWitness(
            data["kind"], data["star"], classes, branches, tail, continuity, addresses
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError("witness", f"malformed witness ({exc})") from exc


def loads_witness(text: str) -> TopologyWitness:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return witness_from_json(data)
