"""CLI exit codes, formats, and file generation."""

from __future__ import annotations

import csv
import json

import pytest

import corpus
from bpmncheck import parse_bpmn, serialize_bpmn, generate_parallel
from bpmncheck.cli import main


@pytest.fixture
def parallel_file(tmp_path):
    path = tmp_path / "parallel_5_1.bpmn"
    path.write_text(serialize_bpmn(generate_parallel(5, 1)), encoding="utf-8")
    return path


@pytest.fixture
def violating_file(tmp_path):
    path = tmp_path / "mismatch.bpmn"
    path.write_text(serialize_bpmn(corpus.mismatched_gateways()), encoding="utf-8")
    return path


def test_check_sound_model_exits_zero(parallel_file, capsys):
    code = main(["check", str(parallel_file), "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["stats"]["states"] == 35
    assert all(p["fulfilled"] for p in out["properties"])


def test_check_violations_exit_one_and_list_elements(violating_file, capsys):
    code = main(["check", str(violating_file), "--format", "json", "--quick-fixes"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    by_name = {p["name"]: p for p in out["properties"]}
    assert by_name["Safeness"]["fulfilled"] is False
    assert by_name["Safeness"]["problematicElements"] == ["f6", "f7"]
    assert by_name["ProperCompletion"]["problematicElements"] == ["E"]
    assert out["quickFixes"]


def test_check_text_format(violating_file, capsys):
    code = main(["check", str(violating_file)])
    out = capsys.readouterr().out
    assert code == 1
    assert "Safeness: violated (f6, f7)" in out
    assert "Option To Complete: fulfilled" in out
    assert "states: " in out


def test_check_unparseable_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.bpmn"
    bad.write_text("<bpmn:definitions xmlns:bpmn='x'><bpmn:process id='p'><bpmn:subProcess id='s'/></bpmn:process></bpmn:definitions>")
    code = main(["check", str(bad)])
    err = capsys.readouterr().err
    assert code == 2
    assert "UnsupportedElement" in err


def test_check_missing_file_exits_two(tmp_path, capsys):
    code = main(["check", str(tmp_path / "nope.bpmn")])
    assert code == 2


def test_check_state_limit_exits_two(parallel_file, capsys):
    code = main(["check", str(parallel_file), "--max-states", "10"])
    err = capsys.readouterr().err
    assert code == 2
    assert "limit" in err


def test_check_property_subset(violating_file, capsys):
    code = main(["check", str(violating_file), "--properties", "option-to-complete", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert [p["name"] for p in out["properties"]] == ["OptionToComplete"]


def test_generate_parallel_writes_valid_file(tmp_path, capsys):
    code = main(["generate", "parallel", "--n", "2", "--m", "3", "--out-dir", str(tmp_path)])
    assert code == 0
    path = tmp_path / "parallel_2_3.bpmn"
    assert path.exists()
    model = parse_bpmn(path.read_text(encoding="utf-8"))
    assert not isinstance(model, list)


def test_generate_blocks_range(tmp_path):
    code = main(["generate", "blocks", "--k", "1:5", "--out-dir", str(tmp_path)])
    assert code == 0
    files = sorted(tmp_path.glob("blocks_*.bpmn"))
    assert len(files) == 5
    assert files[0].name == "blocks_001.bpmn"


def test_generate_invalid_params_exit_two(tmp_path, capsys):
    assert main(["generate", "parallel", "--out-dir", str(tmp_path)]) == 2
    assert main(["generate", "parallel", "--n", "0", "--m", "1", "--out-dir", str(tmp_path)]) == 2
    assert main(["generate", "blocks", "--out-dir", str(tmp_path)]) == 2


def test_generate_rejects_malformed_range(tmp_path):
    with pytest.raises(SystemExit) as exc_info:
        main(["generate", "blocks", "--k", "abc", "--out-dir", str(tmp_path)])
    assert exc_info.value.code == 2


def test_bench_writes_csv(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", "--parallel", "2x1,1x1", "--repetitions", "10", "--format", "csv", "--out", str(out)]
    )
    assert code == 0
    with out.open() as fh:
        rows = list(csv.DictReader(fh))
    assert [r["name"] for r in rows] == ["parallel_2_1", "parallel_1_1"]
    assert [int(r["states"]) for r in rows] == [7, 5]
    assert all(float(r["mean_ms"]) > 0 for r in rows)


def test_bench_json_to_stdout(capsys):
    code = main(["bench", "--parallel", "1x1", "--repetitions", "10", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)
    assert code == 0
    assert rows[0]["states"] == 5


def test_exit_code_contract_across_corpus(tmp_path, capsys):
    from bpmncheck import check

    for name, model in corpus.corpus():
        path = tmp_path / f"{name}.bpmn"
        path.write_text(serialize_bpmn(model), encoding="utf-8")
        code = main(["check", str(path)])
        capsys.readouterr()
        expected = 0 if check(model).all_fulfilled() else 1
        assert code == expected, name
