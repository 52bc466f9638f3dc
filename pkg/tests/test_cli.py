import json

import pytest

from moncomp.cli import main


def call(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "id.while").write_text("X0 := X0\n")
    (tmp_path / "loop.while").write_text("X1 := cons(nil, nil); while X1 { X0 := X0 }\n")
    (tmp_path / "bad.while").write_text("X0 := := \n")
    (tmp_path / "add.while").write_text(
        "split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2\n")
    return tmp_path


def test_run_halts(capsys, files):
    code, out = call(capsys, "run", str(files / "id.while"), "(() . ())")
    assert code == 0 and out["halted"] and out["time"] == 2


def test_run_out_of_fuel(capsys, files):
    code, out = call(capsys, "run", str(files / "loop.while"), "()", "--fuel", "50")
    assert code == 2 and not out["halted"]


def test_parse_errors_are_usage_errors(capsys, files):
    assert main(["run", str(files / "bad.while"), "()"]) == 1
    assert main(["run", str(files / "id.while"), "(()"]) == 1
    assert main(["run", str(files / "missing.while"), "()"]) == 1
    assert main(["run", str(files / "id.while"), "()", "--fuel", "-3"]) == 1


def test_trace_carries_code(capsys, files):
    code, out = call(capsys, "trace", str(files / "id.while"), "()")
    assert code == 0 and out["trace_code"].startswith("(")


def test_measure_unary_addition(capsys, files):
    # 3 + 2 in unary: 9*3 + 4 time units
    code, out = call(capsys, "measure", str(files / "add.while"), "((() . (() . (() . ()))) . (() . (() . ())))")
    assert code == 0 and out["grade"]["value"] == 31
    code, out = call(capsys, "measure", str(files / "loop.while"), "()", "--cap", "100")
    assert code == 2 and out["grade"] is None


def test_mu_agrees_with_blind_search(capsys, files):
    code, out = call(capsys, "mu", str(files / "id.while"), "()", "--naive-cap", "100000")
    assert code == 0 and out["naive"]["agrees"]


def test_diagram_commands(capsys, tmp_path):
    copy_then_compare = {"kind": "seq", "parts": [{"kind": "copy", "base": "A"}, {"kind": "compare", "base": "A"}]}
    path = tmp_path / "d.json"
    path.write_text(json.dumps(copy_then_compare))
    code, out = call(capsys, "diagram", "normalize", str(path))
    assert code == 0
    code, out = call(capsys, "diagram", "eval", str(path), "--carrier", "3")
    assert code == 0 and sorted(map(tuple, (map(tuple, p) for p in out["pairs"]))) == [((i,), (i,)) for i in range(3)]
    path.write_text("{not json")
    assert main(["diagram", "eval", str(path)]) == 1


def test_suite_exit_codes(capsys):
    code, out = call(capsys, "suite", "grading", "--cases", "20")
    assert code == 0 and out["failures"] == 0
    assert main(["suite", "nonexistent"]) == 1


@pytest.mark.parametrize("mutant", ["admin", "statement", "expr"])
def test_suite_catches_cost_mutants(capsys, mutant):
    code, out = call(capsys, "suite", "machine", "--cases", "20", "--mutant", mutant)
    assert code == 3
    failing = {law["name"] for law in out["laws"] if not law["ok"]}
    assert "machine.trace_replay" in failing


def test_corpus_round_trip(capsys, tmp_path):
    code, out = call(capsys, "corpus", str(tmp_path / "c"), "--seed", "5", "--count", "12")
    assert code == 0 and out["entries"] > 0
    code, out = call(capsys, "nf-check", "--corpus", str(tmp_path / "c"), "--cap", "2000")
    assert code == 0 and out["failures"] == 0
    code, out = call(capsys, "blum", "--corpus", str(tmp_path / "c"), "--cap", "2000")
    assert code == 0 and out["failures"] == 0
