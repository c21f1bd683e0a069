"""Command-line front end.

Exit codes: 0 success/verified, 1 the shrinking condition fails, 2 an
internal invariant or the checker failed, 3 the input could not be parsed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .chains import atomize_chain
from .checker import verify_witness
from .dot import export_dot
from .forest import build_witness, decompose, first_kind_chain, second_kind_branches
from .generate import GeneratorConfig, Shape, gen_system
from .serialize import (
    ParseError,
    atomization_to_json,
    check_to_json,
    condition_to_json,
    decomposition_to_json,
    dumps,
    instance_to_json,
    load_instance,
    loads_witness,
    witness_to_json,
)
from .system import RayPresentation, check_condition, check_condition_ray

EXIT_OK = 0
EXIT_CONDITION = 1
EXIT_INTERNAL = 2
EXIT_PARSE = 3


def _condition(inst):
    if isinstance(inst, RayPresentation):
        return check_condition_ray(inst)
    return check_condition(inst)


def _decomposition_json(inst) -> dict:
    if isinstance(inst, RayPresentation):
        return {
            "star": "*",
            "branches": [
                {"index": b.ray_index, "levels": [sorted(lv) for lv in b.level_sets]}
                for b in second_kind_branches(inst)
            ],
            "tail_start": inst.prefix,
        }
    return decomposition_to_json(decompose(inst))


def _atomizations_json(inst) -> list:
    if isinstance(inst, RayPresentation):
        named = [(f"branch{b.ray_index}", b.chain) for b in second_kind_branches(inst)]
    else:
        named = [
            (f"class{i}", first_kind_chain(inst, c)) for i, c in enumerate(decompose(inst).classes)
        ]
    return [
        {"chain": name, "levels": [sorted(lv) for lv in ch.levels], **atomization_to_json(atomize_chain(ch))}
        for name, ch in named
    ]


def run_pipeline(path, shuffle_orders: int | None = None, witness_path=None) -> tuple[int, dict]:
    """check -> decompose -> atomize -> compactify -> verify, with every stage in the report.

    With ``witness_path`` the given witness is verified instead of a freshly built one.
    """
    try:
        inst = load_instance(path)
        given = None
        if witness_path is not None:
            given = loads_witness(Path(witness_path).read_text())
    except (OSError, ParseError) as exc:
        return EXIT_PARSE, {"status": "parse-error", "error": str(exc)}
    report: dict = {"instance": instance_to_json(inst)}
    cond = _condition(inst)
    report["condition"] = condition_to_json(cond)
    if not cond.holds:
        report["status"] = "condition-fails"
        return EXIT_CONDITION, report
    try:
        report["decomposition"] = _decomposition_json(inst)
        witness = given if given is not None else build_witness(inst, shuffle_orders)
        check = verify_witness(inst, witness)
    except ValueError as exc:
        report["status"] = "invariant-violation"
        report["error"] = f"{type(exc).__name__}: {exc}"
        return EXIT_INTERNAL, report
    report["witness"] = witness_to_json(witness)
    report["check"] = check_to_json(check)
    report["status"] = "verified" if check.passed else "invariant-violation"
    return (EXIT_OK if check.passed else EXIT_INTERNAL), report


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_or_exit(path):
    try:
        return load_instance(path)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _require_condition(inst) -> None:
    cond = _condition(inst)
    if not cond.holds:
        sys.stdout.write(dumps({"condition": condition_to_json(cond), "status": "condition-fails"}))
        raise SystemExit(EXIT_CONDITION)


def cmd_check(args) -> int:
    cond = _condition(_load_or_exit(args.instance))
    _emit(dumps(condition_to_json(cond)), args.out)
    return EXIT_OK if cond.holds else EXIT_CONDITION


def cmd_decompose(args) -> int:
    inst = _load_or_exit(args.instance)
    _require_condition(inst)
    _emit(dumps(_decomposition_json(inst)), args.out)
    return EXIT_OK


def cmd_atomize(args) -> int:
    inst = _load_or_exit(args.instance)
    _require_condition(inst)
    _emit(dumps(_atomizations_json(inst)), args.out)
    return EXIT_OK


def cmd_compactify(args) -> int:
    inst = _load_or_exit(args.instance)
    _require_condition(inst)
    witness = build_witness(inst, args.shuffle_orders)
    if args.format == "dot":
        _emit(export_dot(inst, witness), args.out)
    else:
        _emit(dumps(witness_to_json(witness)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    code, report = run_pipeline(args.instance, args.shuffle_orders, args.witness)
    if code == EXIT_PARSE:
        print(f"error: {report['error']}", file=sys.stderr)
    _emit(dumps(report), args.out)
    return code


def cmd_gen(args) -> int:
    system = gen_system(GeneratorConfig(args.size, args.seed, Shape(args.shape)))
    _emit(dumps(instance_to_json(system)), args.out)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    inst = _load_or_exit(args.instance)
    witness = None
    if args.witness:
        _require_condition(inst)
        witness = build_witness(inst, args.shuffle_orders)
    _emit(export_dot(inst, witness), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfmap-compact",
        description="Compactify a selfmap whose iterated images shrink to a point.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, instance=True):
        p = sub.add_parser(name, help=help)
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "decide the shrinking condition")
    add("decompose", cmd_decompose, "split into trees (or ray branches)")
    add("atomize", cmd_atomize, "atomizing partitions per chain")
    p = add("compactify", cmd_compactify, "build the topology witness")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--shuffle-orders", type=int, metavar="SEED")
    p = add("verify", cmd_verify, "full pipeline plus independent check")
    p.add_argument("--witness", help="verify this witness file instead of building one")
    p.add_argument("--shuffle-orders", type=int, metavar="SEED")
    p = add("gen", cmd_gen, "generate a random shrinking system", instance=False)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shape", choices=[s.value for s in Shape], default=Shape.UNIFORM.value)
    p = add("export-dot", cmd_export_dot, "Graphviz DOT of the functional graph")
    p.add_argument("--witness", action="store_true", help="cluster by tree, level and atom")
    p.add_argument("--shuffle-orders", type=int, metavar="SEED")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
