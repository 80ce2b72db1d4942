"""Wire-format projection: schema shape, delta replay, canonical JSON."""

from __future__ import annotations

import json

import pytest

import corpus
from bpmncheck import check, explore, suggest_fixes, to_json
from bpmncheck.quickfix import (
    AddEndEvent,
    AddMessageFlow,
    AddSequenceFlow,
    ChangeGatewayKind,
    InsertGateway,
    NodeKind,
    RemoveEndEvent,
    RemoveInsertedGateway,
    RemoveMessageFlow,
    RemoveSequenceFlow,
    edit_from_wire,
    edit_to_wire,
)
from bpmncheck.report import check_report


def violating_report():
    model = corpus.mismatched_gateways()
    result, record = explore(model)
    fixes = suggest_fixes(model, result)
    return check_report(result, record.initial, fixes)


def test_report_shape():
    report = violating_report()
    assert report["schemaVersion"] == 1
    names = [p["name"] for p in report["properties"]]
    assert names == ["Safeness", "OptionToComplete", "ProperCompletion", "NoDeadActivities"]
    safeness = report["properties"][0]
    assert safeness["fulfilled"] is False
    assert safeness["problematicElements"] == ["f6", "f7"]
    otc = report["properties"][1]
    assert otc["fulfilled"] is True
    assert otc["problematicElements"] == []
    assert report["stats"]["states"] == check(corpus.mismatched_gateways()).state_count
    assert report["quickFixes"]
    for fix in report["quickFixes"]:
        assert set(fix) == {"id", "property", "anchorElement", "edits", "rationale"}


def test_counterexample_deltas_replay_to_final_state():
    model = corpus.mismatched_gateways()
    result, record = explore(model)
    report = check_report(result, record.initial)
    steps = report["counterexamples"]["Safeness"]
    assert [s["executedElement"] for s in steps] == ["p1", "A", "B", "e1", "e1"]

    tokens = dict(report["initialTokens"])
    for step in steps:
        for fid, diff in step["stateDelta"]["tokens"].items():
            tokens[fid] = tokens.get(fid, 0) + diff
            if not tokens[fid]:
                del tokens[fid]
    assert tokens == {"f6": 2}


def test_no_dead_activities_never_has_counterexample():
    model = corpus.disconnected_task()
    result, record = explore(model)
    report = check_report(result, record.initial)
    assert "NoDeadActivities" not in report["counterexamples"]
    dead = next(p for p in report["properties"] if p["name"] == "NoDeadActivities")
    assert dead["problematicElements"] == ["D"]


def test_canonical_json_round_trips_byte_stable():
    report = violating_report()
    rendered = to_json(report)
    assert to_json(json.loads(rendered)) == rendered


@pytest.mark.parametrize(
    "edit",
    [
        ChangeGatewayKind("g1", NodeKind.PARALLEL_GATEWAY),
        InsertGateway(NodeKind.EXCLUSIVE_GATEWAY, "T", "after", ("f1", "f2"), "g2", "cf"),
        RemoveInsertedGateway("g2", NodeKind.EXCLUSIVE_GATEWAY, "T", "after", ("f1", "f2"), "cf"),
        AddEndEvent("f9", "end2"),
        RemoveEndEvent("end2", "f9", "E"),
        AddSequenceFlow("a", "b", "f10"),
        RemoveSequenceFlow("f10", "a", "b"),
        AddMessageFlow("snd", "rcv", "m9"),
        RemoveMessageFlow("m9", "snd", "rcv"),
    ],
)
def test_edit_wire_round_trip(edit):
    assert edit_from_wire(edit_to_wire(edit)) == edit


def test_edit_from_wire_rejects_garbage():
    with pytest.raises(ValueError):
        edit_from_wire({"type": "teleportGateway"})
    with pytest.raises(ValueError):
        edit_from_wire({"type": "addEndEvent"})
