"""Graphviz DOT text for systems and witnesses (output only)."""

from __future__ import annotations

import json

from .forest import TopologyWitness
from .system import RayPresentation, SelfmapSystem, check_condition, ray_node


def _q(x) -> str:
    return json.dumps(str(x))


def _edges(points, image) -> list[str]:
    return [f"  {_q(x)} -> {_q(image(x))};" for x in points]


def export_dot(obj: SelfmapSystem | RayPresentation, witness: TopologyWitness | None = None) -> str:
    """Functional graph ``x -> Tx``; with a witness, trees become clusters,
    levels share a rank and each atom gets a box."""
    lines = ["digraph selfmap {", "  rankdir=BT;", "  node [shape=circle];"]
    if isinstance(obj, RayPresentation):
        points = obj.explicit_points()
        image = obj.image
        star = "*"
    else:
        points = list(range(obj.size))
        image = obj.__call__
        report = check_condition(obj)
        star = report.fixed_point if report.holds else None
    if star is not None:
        lines.append(f"  {_q(star)} [shape=doublecircle];")
    if witness is not None:
        chains = [(f"class{c.class_id}", c.chain) for c in witness.classes]
        chains += [(f"branch{b.index}", b.chain) for b in witness.branches]
        for name, cw in chains:
            lines.append(f"  subgraph cluster_{name} {{")
            lines.append(f"    label={_q(name)};")
            for n, level in enumerate(cw.orders):
                for a, order in enumerate(level):
                    lines.append(f"    subgraph cluster_{name}_l{n}_a{a} {{")
                    lines.append("      style=rounded;")
                    lines.append(f"      label={_q(f'level {n} atom {a}')};")
                    lines.append("      " + " ".join(f"{_q(x)};" for x in order.sequence))
                    lines.append("    }")
                ranked = " ".join(f"{_q(x)};" for order in level for x in order.sequence)
                lines.append(f"    {{ rank=same; {ranked} }}")
            lines.append("  }")
    lines.extend(_edges(points, image))
    if isinstance(obj, RayPresentation):
        tail = ray_node(obj.prefix)
        lines.append('  "..." [shape=plaintext];')
        lines.append(f'  {_q(tail)} -> "..." [style=dotted];')
    lines.append("}")
    return "\n".join(lines) + "\n"
