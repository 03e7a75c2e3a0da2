# tests/test_cli.py
import io
import json

import pytest

from coalition_forge.cli import run_cli
from coalition_forge.documents import serialize_assignment, serialize_game
from coalition_forge.representation import minimal_representation
from fuzz_support import example2, example3, game_from, no_span_game


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def ex2(tmp_path):
    p = tmp_path / "example2.json"
    p.write_text(serialize_game(example2()), encoding="utf-8")
    return str(p)


@pytest.fixture
def ex3(tmp_path):
    p = tmp_path / "example3.json"
    p.write_text(serialize_game(example3()), encoding="utf-8")
    return str(p)


@pytest.fixture
def nospan(tmp_path):
    p = tmp_path / "nospan.json"
    p.write_text(serialize_game(no_span_game(1, 1)), encoding="utf-8")
    return str(p)


def test_solve_example2(ex2):
    code, out, err = run("solve", ex2)
    assert code == 0
    assert json.loads(out) == {"a": "-3", "b": "-7", "c": "-4", "d": "-6", "e": "-2", "total": "-22"}


def test_represent_example2(ex2):
    code, out, _ = run("represent", ex2)
    assert code == 0
    doc = json.loads(out)
    assert [(f["users"], f["cost"]) for f in doc["facilities"]] == [
        (["a", "b"], "-6"), (["d", "e"], "-4"), (["b", "c", "d"], "-12"),
    ]


def test_check_example2(ex2):
    code, out, err = run("check", ex2)
    assert code == 0
    assert json.loads(out)["full_span"] is True
    assert "full span: yes; hierarchy: found" in err


def test_check_without_full_span(nospan):
    code, out, err = run("check", nospan)
    assert code == 1
    assert "full span: no; hierarchy: none" in err
    assert json.loads(out)["mm_rank"] == 1


def test_structural_failures_exit_1(nospan, ex2):
    for command in ("represent", "solve", "extend"):
        code, out, err = run(command, nospan)
        assert code == 1 and out == "" and err.startswith("error:")
    code, _, err = run("shapley", ex2)
    assert code == 1
    code, _, _ = run("dual", ex2)
    assert code == 1


def test_validate(tmp_path, ex2):
    g = example2()
    rep = minimal_representation(g)
    good = tmp_path / "rep.json"
    good.write_text(serialize_assignment(rep), encoding="utf-8")
    code, out, _ = run("validate", ex2, str(good))
    assert code == 0 and json.loads(out)["ok"] is True

    doc = json.loads(serialize_assignment(rep))
    doc["facilities"][0]["cost"] = "-5"
    wrong = tmp_path / "wrongrep.json"
    wrong.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run("validate", ex2, str(wrong))
    assert code == 1
    assert json.loads(out)["violations"] == ["mismatch at {a,b}: -17 != -18"]
    assert "mismatch at {a,b}" in err


def test_shapley_and_extend(tmp_path, ex2):
    code, out, _ = run("extend", ex2)
    assert code == 0
    extended = tmp_path / "extended.json"
    extended.write_text(out, encoding="utf-8")
    assert len(json.loads(out)["coalitions"]) == 31
    code, out, _ = run("shapley", str(extended))
    assert code == 0
    assert json.loads(out)["total"] == "-22" and json.loads(out)["a"] == "-3"


def test_harsanyi_and_dual(ex3):
    code, out, err = run("harsanyi", ex3)
    assert code == 0
    assert json.loads(out) == {"1": "-4/3", "2": "-4/3", "3": "-4/3", "total": "-4"}
    assert "not chi" in err
    code, out, _ = run("dual", ex3)
    assert code == 0
    assert [c["value"] for c in json.loads(out)["coalitions"]] == ["-2", "-3", "-4"]


def test_analyze(ex3):
    code, out, _ = run("analyze", ex3)
    assert code == 0
    assert json.loads(out) == {"symmetric_pairs": [["2", "3"]], "dummies": [], "superadditive": False, "cost_game": False}


def test_gen_partition(tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({
        "players": ["1", "2", "3"],
        "partitions": [
            {"atoms": [{"members": ["1"], "value": "1"}, {"members": ["2", "3"], "value": "2"}]},
            {"atoms": [{"members": ["1", "2"], "value": "2"}, {"members": ["3"], "value": "2"}]},
        ],
    }), encoding="utf-8")
    code, out, _ = run("gen-partition", str(scenario))
    assert code == 0
    doc = json.loads(out)
    assert len(doc["coalitions"]) == 5
    assert doc["coalitions"][-1] == {"members": ["1", "2", "3"], "value": "3"}


def test_gen_partition_invalid_scenario_exits_2(tmp_path):
    scenario = tmp_path / "bad.json"
    scenario.write_text(json.dumps({"players": ["1", "2"], "partitions": [
        {"atoms": [{"members": ["1"], "value": "1"}]}]}), encoding="utf-8")
    code, _, err = run("gen-partition", str(scenario))
    assert code == 2 and "uncovered" in err


def test_expand_is_deterministic_and_reduces(tmp_path, ex2):
    rep = minimal_representation(example2())
    path = tmp_path / "rep.json"
    path.write_text(serialize_assignment(rep), encoding="utf-8")
    first = run("expand", str(path), "--seed", "7", "--zero-facilities", "2", "--max-replicas", "3", "--game", ex2)
    second = run("expand", str(path), "--seed", "7", "--zero-facilities", "2", "--max-replicas", "3", "--game", ex2)
    assert first == second and first[0] == 0
    expanded = tmp_path / "expanded.json"
    expanded.write_text(first[1], encoding="utf-8")
    code, out, _ = run("validate", ex2, str(expanded))
    assert code == 0


def test_expand_without_game_uses_user_sets(tmp_path):
    rep = minimal_representation(example3())
    path = tmp_path / "rep.json"
    path.write_text(serialize_assignment(rep), encoding="utf-8")
    code, out, _ = run("expand", str(path), "--seed", "1", "--zero-facilities", "1", "--max-replicas", "1")
    assert code == 0
    assert len(json.loads(out)["facilities"]) == 4


def test_parse_errors_exit_2(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"players": [', encoding="utf-8")
    code, out, err = run("solve", str(broken))
    assert code == 2 and out == "" and "line" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"players": ["1"], "coalitions": [{"members": ["1"], "value": "1/0"}]}), encoding="utf-8")
    assert run("solve", str(bad))[0] == 2
    assert run("solve", str(tmp_path / "missing.json"))[0] == 2


def test_usage_errors_exit_2(ex2):
    code, out, err = run("frobnicate", ex2)
    assert code == 2 and "usage" in err
    assert run()[0] == 2
    assert run("expand", ex2, "--seed", "1", "--max-replicas", "0")[0] == 2


def test_version_and_debug(ex2):
    code, out, _ = run("--version")
    assert code == 0 and out.startswith("coalition-forge ")
    code, out, err = run("--debug", "solve", ex2)
    assert code == 0 and "DEBUG" in err
    assert json.loads(out)["total"] == "-22"


def test_output_is_byte_identical_across_runs(ex2):
    assert run("solve", ex2) == run("solve", ex2)
    assert run("check", ex2) == run("check", ex2)


def test_shapley_on_canonical_document(tmp_path):
    g = game_from(["1", "2"], [(["1"], 1), (["2"], 2), (["1", "2"], 4)])
    path = tmp_path / "two.json"
    path.write_text(serialize_game(g), encoding="utf-8")
    code, out, _ = run("shapley", str(path))
    assert code == 0 and json.loads(out) == {"1": "3/2", "2": "5/2", "total": "4"}


def test_non_utf8_document_exits_2(tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"players": ["\xff"], "coalitions": [{"members": ["\xff"], "value": "1"}]}')
    code, out, err = run("solve", str(path))
    assert code == 2 and out == ""
    assert "not valid UTF-8" in err


def test_bad_guard_setting_exits_2(monkeypatch, ex2):
    monkeypatch.setenv("COALITION_FORGE_GUARD_N", "abc")
    code, out, err = run("solve", ex2)
    assert code == 2 and out == ""
    assert "COALITION_FORGE_GUARD_N" in err
