"""Parser, serializer, and validation behaviour."""

from __future__ import annotations

import random

import pytest

import corpus
from bpmncheck import (
    IssueCategory,
    NodeKind,
    generate_blocks,
    generate_parallel,
    parse_bpmn,
    serialize_bpmn,
)

MINIMAL = """<?xml version="1.0" encoding="UTF-8"?>
<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL"
                  xmlns:bpmndi="http://www.omg.org/spec/BPMN/20100524/DI"
                  xmlns:dc="http://www.omg.org/spec/DD/20100524/DC"
                  id="defs" targetNamespace="http://example.org">
  <bpmn:process id="p1">
    <bpmn:startEvent id="start"/>
    <bpmn:task id="A" name="do work"/>
    <bpmn:endEvent id="end"/>
    <bpmn:sequenceFlow id="f1" sourceRef="start" targetRef="A"/>
    <bpmn:sequenceFlow id="f2" sourceRef="A" targetRef="end"/>
  </bpmn:process>
  <bpmndi:BPMNDiagram id="d1">
    <bpmndi:BPMNPlane id="pl1" bpmnElement="p1">
      <bpmndi:BPMNShape id="s1" bpmnElement="start"><dc:Bounds x="82" y="82" width="36" height="36"/></bpmndi:BPMNShape>
      <bpmndi:BPMNShape id="s2" bpmnElement="A"><dc:Bounds x="150" y="60" width="100" height="80"/></bpmndi:BPMNShape>
      <bpmndi:BPMNShape id="s3" bpmnElement="end"><dc:Bounds x="282" y="82" width="36" height="36"/></bpmndi:BPMNShape>
    </bpmndi:BPMNPlane>
  </bpmndi:BPMNDiagram>
</bpmn:definitions>
"""


def _wrap_process(body: str) -> str:
    return (
        '<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL" id="defs" '
        'targetNamespace="http://example.org">'
        f'<bpmn:process id="p1">{body}</bpmn:process></bpmn:definitions>'
    )


def test_minimal_process_parses():
    model = parse_bpmn(MINIMAL)
    assert not isinstance(model, list)
    p = model.processes[0]
    assert len(p.flow_nodes) == 3
    assert len(p.sequence_flows) == 2
    assert model.node("A").kind is NodeKind.TASK
    assert model.node("A").name == "do work"
    assert model.diagram["start"] == (100.0, 100.0)
    assert not model.warnings


def test_subprocess_is_rejected_with_its_id():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/>'
        '<bpmn:subProcess id="sub1"/>'
        '<bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="sub1"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="sub1" targetRef="e"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    unsupported = [i for i in issues if i.category is IssueCategory.UNSUPPORTED_ELEMENT]
    assert any(i.element_id == "sub1" for i in unsupported)
    # the flows referencing the rejected element are not reported as dangling
    assert not any("does not resolve" in i.detail for i in issues)


@pytest.mark.parametrize(
    "snippet,eid",
    [
        ('<bpmn:inclusiveGateway id="ig"/>', "ig"),
        ('<bpmn:boundaryEvent id="be"/>', "be"),
        ('<bpmn:startEvent id="ts"><bpmn:timerEventDefinition/></bpmn:startEvent>', "ts"),
        ('<bpmn:endEvent id="ee"><bpmn:errorEventDefinition/></bpmn:endEvent>', "ee"),
        ('<bpmn:task id="lt"><bpmn:standardLoopCharacteristics/></bpmn:task>', "lt"),
        ('<bpmn:eventBasedGateway id="ig2" instantiate="true"/>', "ig2"),
    ],
)
def test_unsupported_elements_rejected(snippet, eid):
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="e"/>' + snippet
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == eid and i.category is IssueCategory.UNSUPPORTED_ELEMENT for i in issues)


def test_task_subtypes_normalize_to_task():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/>'
        '<bpmn:userTask id="u"/>'
        '<bpmn:serviceTask id="v"/>'
        '<bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="u"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="u" targetRef="v"/>'
        '<bpmn:sequenceFlow id="f3" sourceRef="v" targetRef="e"/>'
    )
    model = parse_bpmn(xml)
    assert not isinstance(model, list)
    assert model.node("u").kind is NodeKind.TASK
    assert model.node("v").kind is NodeKind.TASK


def test_generator_output_reparses_with_expected_counts():
    xml = serialize_bpmn(generate_parallel(5, 1))
    model = parse_bpmn(xml)
    assert not isinstance(model, list)
    kinds = [n.kind for n in model.processes[0].flow_nodes]
    assert kinds.count(NodeKind.TASK) == 5
    assert kinds.count(NodeKind.PARALLEL_GATEWAY) == 2
    assert kinds.count(NodeKind.NONE_START) == 1
    assert kinds.count(NodeKind.NONE_END) == 1
    assert len(model.processes[0].sequence_flows) == 12


@pytest.mark.parametrize("name,model", corpus.corpus())
def test_round_trip_structural_equality(name, model):
    again = parse_bpmn(serialize_bpmn(model))
    assert not isinstance(again, list), f"{name}: {again}"
    assert model.structurally_equal(again), name
    assert again.structurally_equal(model), name


def test_round_trip_blocks():
    model = generate_blocks(3)
    again = parse_bpmn(serialize_bpmn(model))
    assert not isinstance(again, list)
    assert model.structurally_equal(again)


def test_gateway_kind_change_shows_up_as_local_diff():
    from bpmncheck import ChangeGatewayKind, Property, QuickFix, apply_fix

    model = corpus.mismatched_gateways()
    fix = QuickFix(
        "fix-test",
        Property.SAFENESS,
        "e1",
        (ChangeGatewayKind("e1", NodeKind.PARALLEL_GATEWAY),),
        "",
        "merge-to-parallel",
    )
    edited, _inverse = apply_fix(model, fix)
    before = serialize_bpmn(model).splitlines()
    after = serialize_bpmn(edited).splitlines()
    changed = [
        (a, b) for a, b in zip(before, after) if a != b
    ]
    assert len(before) == len(after)
    assert len(changed) == 1
    assert "exclusiveGateway" in changed[0][0] and "parallelGateway" in changed[0][1]
    assert 'id="e1"' in changed[0][0]


def test_parse_is_total_on_noise():
    rng = random.Random(7)
    inputs = [
        "",
        "    ",
        "<",
        "not xml at all",
        "<definitions>",
        "<bpmn:process/>",
        '<?xml version="1.0"?><html><body/></html>',
        "\x00\x01\x02",
    ]
    inputs += ["".join(chr(rng.randrange(32, 127)) for _ in range(80)) for _ in range(20)]
    for text in inputs:
        outcome = parse_bpmn(text)
        assert isinstance(outcome, list) and outcome, repr(text[:40])


def test_issue_lists_are_deterministic():
    xml = _wrap_process(
        '<bpmn:subProcess id="sub"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="ghost" targetRef="spirit"/>'
    )
    first = parse_bpmn(xml)
    second = parse_bpmn(xml)
    assert first == second


def test_dangling_flow_reference_reported_per_reference():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="nowhere"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="s" targetRef="e"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any("nowhere" in i.detail and i.element_id == "f1" for i in issues)


def test_duplicate_ids_rejected():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/>'
        '<bpmn:task id="dup"/><bpmn:task id="dup"/>'
        '<bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="dup"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="dup" targetRef="e"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any("duplicate" in i.detail for i in issues)


def test_start_event_with_incoming_flow_rejected():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/><bpmn:task id="A"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="A"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="A" targetRef="s"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == "s" for i in issues)


def test_process_without_instantiation_rejected():
    xml = _wrap_process('<bpmn:task id="A"/>')
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == "p1" and "start event" in i.detail for i in issues)


def test_instantiating_receive_task_accepts_startless_process():
    xml = (
        '<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL" id="d" '
        'targetNamespace="http://example.org">'
        '<bpmn:collaboration id="collab">'
        '<bpmn:participant id="pa" processRef="p1"/>'
        '<bpmn:participant id="pb" processRef="p2"/>'
        '<bpmn:messageFlow id="m1" sourceRef="snd" targetRef="rcv"/>'
        "</bpmn:collaboration>"
        '<bpmn:process id="p1">'
        '<bpmn:startEvent id="s"/><bpmn:sendTask id="snd"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="snd"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="snd" targetRef="e"/>'
        "</bpmn:process>"
        '<bpmn:process id="p2">'
        '<bpmn:receiveTask id="rcv" instantiate="true"/><bpmn:endEvent id="e2"/>'
        '<bpmn:sequenceFlow id="g1" sourceRef="rcv" targetRef="e2"/>'
        "</bpmn:process>"
        "</bpmn:definitions>"
    )
    model = parse_bpmn(xml)
    assert not isinstance(model, list)
    assert model.node("rcv").instantiate


def test_message_flow_endpoint_kinds_enforced():
    xml = (
        '<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL" id="d" '
        'targetNamespace="http://example.org">'
        '<bpmn:collaboration id="collab">'
        '<bpmn:messageFlow id="m1" sourceRef="A" targetRef="B"/>'
        "</bpmn:collaboration>"
        '<bpmn:process id="p1">'
        '<bpmn:startEvent id="s1"/><bpmn:task id="A"/><bpmn:endEvent id="e1"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s1" targetRef="A"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="A" targetRef="e1"/>'
        "</bpmn:process>"
        '<bpmn:process id="p2">'
        '<bpmn:startEvent id="s2"/><bpmn:task id="B"/><bpmn:endEvent id="e2"/>'
        '<bpmn:sequenceFlow id="g1" sourceRef="s2" targetRef="B"/>'
        '<bpmn:sequenceFlow id="g2" sourceRef="B" targetRef="e2"/>'
        "</bpmn:process>"
        "</bpmn:definitions>"
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == "m1" and "cannot send" in i.detail for i in issues)


def test_event_gateway_arm_kinds_enforced():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/>'
        '<bpmn:eventBasedGateway id="g"/>'
        '<bpmn:task id="A"/>'
        '<bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="g"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="g" targetRef="A"/>'
        '<bpmn:sequenceFlow id="f3" sourceRef="A" targetRef="e"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == "g" for i in issues)


def test_link_events_must_pair():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/>'
        '<bpmn:intermediateThrowEvent id="lt"><bpmn:linkEventDefinition name="L"/></bpmn:intermediateThrowEvent>'
        '<bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="lt"/>'
    )
    issues = parse_bpmn(xml)
    assert isinstance(issues, list)
    assert any(i.element_id == "lt" and "link" in i.detail for i in issues)


def test_missing_coordinates_become_warning_and_default():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/><bpmn:task id="A"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="A"/>'
        '<bpmn:sequenceFlow id="f2" sourceRef="A" targetRef="e"/>'
    )
    model = parse_bpmn(xml)
    assert not isinstance(model, list)
    assert model.diagram["A"] == (0.0, 0.0)
    assert "A" in model.missing_coords
    assert not model.has_layout("A")
    assert any(i.element_id == "A" for i in model.warnings)


def test_lanes_and_data_objects_warn_but_do_not_fail():
    xml = _wrap_process(
        '<bpmn:startEvent id="s"/><bpmn:endEvent id="e"/>'
        '<bpmn:sequenceFlow id="f1" sourceRef="s" targetRef="e"/>'
        '<bpmn:laneSet id="ls"/><bpmn:dataObject id="do1"/>'
    )
    model = parse_bpmn(xml)
    assert not isinstance(model, list)
    ids = {w.element_id for w in model.warnings}
    assert {"ls", "do1"} <= ids
