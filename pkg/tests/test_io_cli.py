import json
import random

import pytest

from mutations import random_ray
from selfmap_compact.checker import verify_witness
from selfmap_compact.cli import main, run_pipeline
from selfmap_compact.dot import export_dot
from selfmap_compact.forest import build_witness
from selfmap_compact.generate import GeneratorConfig, Shape, gen_system
from selfmap_compact.partitions import Partition
from selfmap_compact.serialize import (
    ParseError,
    dumps,
    instance_from_json,
    instance_to_json,
    loads_instance,
    partition_from_json,
    partition_to_json,
    witness_from_json,
    witness_to_json,
)
from selfmap_compact.system import BranchTree, RayPresentation, SelfmapSystem, check_condition

ONE_NODE = RayPresentation(2, (BranchTree((), {}), BranchTree(("c",), {"c": "b1"})))


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# --- round trips -----------------------------------------------------------


def test_roundtrip_instances():
    rng = random.Random(0)
    for _ in range(30):
        s = gen_system(GeneratorConfig(rng.randint(1, 50), rng.getrandbits(64)))
        assert instance_from_json(json.loads(dumps(instance_to_json(s)))) == s
        r = random_ray(rng)
        assert instance_from_json(json.loads(dumps(instance_to_json(r)))) == r


def test_roundtrip_partition():
    p = Partition([[3, 1], [2], [7, 5, 4]])
    assert partition_to_json(p) == [[1, 3], [2], [4, 5, 7]]
    assert partition_from_json(partition_to_json(p)) == p


@pytest.mark.parametrize("seed", [None, 5])
def test_roundtrip_witness(seed):
    rng = random.Random(1)
    insts = [gen_system(GeneratorConfig(rng.randint(1, 60), i)) for i in range(15)]
    insts += [ONE_NODE] + [random_ray(rng) for _ in range(5)]
    for inst in insts:
        w = build_witness(inst, seed)
        back = witness_from_json(json.loads(dumps(witness_to_json(w))))
        assert back == w
        assert verify_witness(inst, back).passed


def test_parse_errors_name_the_field():
    with pytest.raises(ParseError) as info:
        loads_instance('{"size": 3, "map": [0, 5, 1]}')
    assert info.value.where == "map[1]"
    with pytest.raises(ParseError) as info:
        loads_instance('{"size": 3, "map": [0, 0]}')
    assert info.value.where == "map"
    with pytest.raises(ParseError) as info:
        loads_instance('{"size": 2,\n "map": [0, 0')
    assert info.value.where.startswith("line 2")
    with pytest.raises(ParseError):
        loads_instance('{"ray": {"prefix": 1, "branches": [{"nodes": ["c"], "parent": {"c": "*"}}]}}')


# --- generator -------------------------------------------------------------


def test_gen_point():
    for seed in (0, 1, 2**64 - 1):
        assert gen_system(GeneratorConfig(1, seed)).map == (0,)


@pytest.mark.parametrize("shape", list(Shape))
def test_gen_valid_and_deterministic(shape):
    for seed in range(200):
        cfg = GeneratorConfig(random.Random(seed).randint(1, 100), seed, shape)
        s = gen_system(cfg)
        assert s.map[0] == 0 and all(s.map[i] < i for i in range(1, s.size))
        assert check_condition(s).holds
        assert gen_system(cfg) == s


def test_gen_shapes_differ_in_depth():
    def height(s):
        depth = [0] * s.size
        for i in range(1, s.size):
            depth[i] = depth[s.map[i]] + 1
        return max(depth)

    hs = {sh: height(gen_system(GeneratorConfig(300, 9, sh))) for sh in Shape}
    assert hs[Shape.DEEP_CHAIN] > hs[Shape.UNIFORM] > hs[Shape.WIDE_FAN]


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(0)
    with pytest.raises(ValueError):
        GeneratorConfig(3, -1)


# --- DOT -------------------------------------------------------------------


def test_dot_point():
    text = export_dot(SelfmapSystem.from_list([0]))
    assert '"0" -> "0";' in text
    assert text.count("->") == 1


def test_dot_edges():
    text = export_dot(SelfmapSystem.from_list([0, 0, 0, 1]))
    edges = {line.strip() for line in text.splitlines() if "->" in line}
    assert edges == {'"0" -> "0";', '"1" -> "0";', '"2" -> "0";', '"3" -> "1";'}


def test_dot_witness_levels():
    s = SelfmapSystem.from_list([0, 0, 1, 1, 1, 2])
    text = export_dot(s, build_witness(s))
    assert text.count("rank=same") == 3
    assert export_dot(s, build_witness(s)) == text


def test_dot_ray():
    text = export_dot(ONE_NODE, build_witness(ONE_NODE))
    assert '"c" -> "b1";' in text and '"b1" -> "b2";' in text and '"b2" -> "..."' in text


# --- CLI -------------------------------------------------------------------


def test_pipeline_two_trees(tmp_path):
    code, report = run_pipeline(write(tmp_path, "x.json", {"size": 4, "map": [0, 0, 0, 1]}))
    assert code == 0 and report["status"] == "verified"
    assert len(report["decomposition"]["classes"]) == 2
    assert report["check"]["passed"]


def test_pipeline_swap(tmp_path):
    code, report = run_pipeline(write(tmp_path, "x.json", {"size": 2, "map": [1, 0]}))
    assert code == 1 and report["condition"]["holds"] is False


def test_pipeline_malformed(tmp_path):
    code, report = run_pipeline(write(tmp_path, "x.json", "{not json"))
    assert code == 3 and report["status"] == "parse-error"
    assert run_pipeline(str(tmp_path / "missing.json"))[0] == 3


def test_pipeline_ray(tmp_path):
    code, report = run_pipeline(write(tmp_path, "r.json", instance_to_json(ONE_NODE)))
    assert code == 0
    assert report["decomposition"]["tail_start"] == 2


def test_pipeline_tampered_witness(tmp_path):
    s = SelfmapSystem.from_list([0, 0, 1, 1, 2, 3])
    inst = write(tmp_path, "x.json", instance_to_json(s))
    w = witness_to_json(build_witness(s))
    assert run_pipeline(inst, witness_path=write(tmp_path, "w.json", w))[0] == 0
    w["addresses"][4][1] = w["addresses"][5][1]
    code, report = run_pipeline(inst, witness_path=write(tmp_path, "bad.json", w))
    assert code == 2 and not report["check"]["passed"]
    assert run_pipeline(inst, witness_path=write(tmp_path, "junk.json", "[1"))[0] == 3


def test_cli_commands(tmp_path, capsys):
    inst = write(tmp_path, "x.json", {"size": 6, "map": [0, 0, 1, 1, 1, 2]})
    assert main(["check", inst]) == 0
    assert json.loads(capsys.readouterr().out)["stabilized_at"] == 3
    assert main(["decompose", inst]) == 0
    assert json.loads(capsys.readouterr().out)["classes"][0]["members"] == [1, 2, 3, 4, 5]
    assert main(["atomize", inst]) == 0
    (atom,) = json.loads(capsys.readouterr().out)
    assert atom["lambdas"] == [[[1]], [[2], [3, 4]], [[5]]]
    assert main(["compactify", inst, "--shuffle-orders", "3"]) == 0
    assert verify_witness(
        SelfmapSystem.from_list([0, 0, 1, 1, 1, 2]), witness_from_json(json.loads(capsys.readouterr().out))
    ).passed
    assert main(["compactify", inst, "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph")
    assert main(["export-dot", inst, "--witness"]) == 0
    assert "cluster_class0" in capsys.readouterr().out
    out = tmp_path / "g.json"
    assert main(["gen", "--size", "5", "--seed", "7", "--shape", "deep-chain", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["size"] == 5
    assert main(["verify", str(out)]) == 0
    capsys.readouterr()


def test_cli_condition_failure(tmp_path, capsys):
    inst = write(tmp_path, "x.json", {"size": 2, "map": [1, 0]})
    assert main(["check", inst]) == 1
    with pytest.raises(SystemExit) as info:
        main(["decompose", inst])
    assert info.value.code == 1
    assert main(["verify", inst]) == 1
    with pytest.raises(SystemExit) as info:
        main(["check", write(tmp_path, "bad.json", '{"size": 2, "map": [0, 9]}')])
    assert info.value.code == 3
    capsys.readouterr()


def test_reports_byte_deterministic(tmp_path, capsys):
    inst = write(tmp_path, "x.json", instance_to_json(gen_system(GeneratorConfig(150, 42, Shape.UNIFORM))))
    outs = []
    for _ in range(3):
        assert main(["verify", inst, "--shuffle-orders", "8"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
