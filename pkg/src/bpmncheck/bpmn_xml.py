"""BPMN 2.0 XML reading and writing for the supported element set.

Parsing is total: any input yields either a validated
:class:`~bpmncheck.model.ProcessModel` or a non-empty list of
:class:`~bpmncheck.model.ModelIssue`.  Unsupported BPMN constructs are
rejected rather than skipped, because silently dropping elements would make
verdicts unsound.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .model import (
    FlowNode,
    IssueCategory,
    MessageFlow,
    ModelIssue,
    NodeKind,
    Process,
    ProcessModel,
    SequenceFlow,
    validate_structure,
    build_model,
    ModelError,
)

MODEL_NS = "http://www.omg.org/spec/BPMN/20100524/MODEL"
DI_NS = "http://www.omg.org/spec/BPMN/20100524/DI"
DC_NS = "http://www.omg.org/spec/DD/20100524/DC"
DD_NS = "http://www.omg.org/spec/DD/20100524/DI"

_TASK_TAGS = {"task", "userTask", "serviceTask", "scriptTask", "manualTask", "businessRuleTask"}
_UNSUPPORTED_TAGS = {
    "subProcess",
    "adHocSubProcess",
    "callActivity",
    "transaction",
    "boundaryEvent",
    "inclusiveGateway",
    "complexGateway",
}
# No control-flow semantics: ignored with a warning.
_WARNED_TAGS = {
    "laneSet",
    "dataObject",
    "dataObjectReference",
    "dataStoreReference",
    "textAnnotation",
    "association",
    "group",
}
# Metadata children that are silently acceptable inside a process.
_SILENT_TAGS = {
    "documentation",
    "extensionElements",
    "ioSpecification",
    "property",
    "dataInputAssociation",
    "dataOutputAssociation",
    "auditing",
    "monitoring",
    "resourceRole",
    "performer",
    "potentialOwner",
    "category",
}
_LOOP_TAGS = {"standardLoopCharacteristics", "multiInstanceLoopCharacteristics"}


def _local(tag) -> str:
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _event_definitions(el) -> list[str]:
    return [_local(c.tag) for c in el if _local(c.tag).endswith("EventDefinition")]


def _issue(element_id, detail, category=IssueCategory.UNSUPPORTED_ELEMENT) -> ModelIssue:
    return ModelIssue(element_id, category, detail)


class _ProcessParse:
    def __init__(self, el):
        self.id = el.get("id") or ""
        self.name = el.get("name") or ""
        self.nodes: list[FlowNode] = []
        self.flows: list[SequenceFlow] = []


def parse_bpmn(xml_text: str) -> ProcessModel | list[ModelIssue]:
    """Parse BPMN XML into a model, or report every defect found."""
    try:
        root = ET.fromstring(xml_text)
    except (ET.ParseError, ValueError) as exc:
        return [_issue("document", f"malformed XML: {exc}", IssueCategory.STRUCTURAL_ERROR)]

    if _local(root.tag) != "definitions":
        return [
            _issue(
                root.get("id") or "document",
                f"expected a BPMN definitions document, found <{_local(root.tag)}>",
                IssueCategory.STRUCTURAL_ERROR,
            )
        ]

    issues: list[ModelIssue] = []
    warnings: list[ModelIssue] = []
    skipped_ids: set[str] = set()
    processes: list[_ProcessParse] = []
    message_flows: list[MessageFlow] = []

    def reject(el, detail):
        eid = el.get("id") or _local(el.tag)
        issues.append(_issue(eid, detail))
        if el.get("id"):
            skipped_ids.add(el.get("id"))

    for child in root:
        tag = _local(child.tag)
        if tag == "process":
            processes.append(_parse_process(child, issues, warnings, skipped_ids, reject))
        elif tag == "collaboration":
            for item in child:
                itag = _local(item.tag)
                if itag == "participant":
                    if not item.get("processRef"):
                        warnings.append(
                            _issue(
                                item.get("id") or "participant",
                                "black-box participant ignored (no process)",
                            )
                        )
                elif itag == "messageFlow":
                    mid = item.get("id") or ""
                    src = item.get("sourceRef") or ""
                    tgt = item.get("targetRef") or ""
                    if not (mid and src and tgt):
                        issues.append(
                            _issue(
                                mid or "messageFlow",
                                "message flow needs id, sourceRef, and targetRef",
                                IssueCategory.STRUCTURAL_ERROR,
                            )
                        )
                    else:
                        message_flows.append(MessageFlow(mid, src, tgt))
        elif tag in ("BPMNDiagram", "message", "signal", "error", "itemDefinition", "category"):
            continue
        elif tag in _SILENT_TAGS:
            continue
        else:
            reject(child, f"unsupported definitions element <{tag}>")

    if not processes:
        issues.append(
            _issue(
                root.get("id") or "document",
                "document contains no process",
                IssueCategory.STRUCTURAL_ERROR,
            )
        )

    diagram = _parse_diagram(root)

    procs = tuple(Process(p.id, tuple(p.nodes), tuple(p.flows), p.name) for p in processes)
    issues.extend(validate_structure(procs, message_flows, frozenset(skipped_ids)))
    if issues:
        return issues
    try:
        return build_model(procs, message_flows, diagram, warnings)
    except ModelError as exc:  # pragma: no cover - validate_structure ran above
        return exc.issues


def _parse_process(el, issues, warnings, skipped_ids, reject) -> _ProcessParse:
    parsed = _ProcessParse(el)

    def add(node_el, kind, **extra):
        nid = node_el.get("id") or ""
        if not nid:
            issues.append(
                _issue(
                    _local(node_el.tag),
                    "flow node without an id",
                    IssueCategory.STRUCTURAL_ERROR,
                )
            )
            return
        parsed.nodes.append(FlowNode(nid, kind, node_el.get("name") or "", **extra))

    for node in el:
        tag = _local(node.tag)
        if tag == "sequenceFlow":
            fid = node.get("id") or ""
            src = node.get("sourceRef") or ""
            tgt = node.get("targetRef") or ""
            if not (fid and src and tgt):
                issues.append(
                    _issue(
                        fid or "sequenceFlow",
                        "sequence flow needs id, sourceRef, and targetRef",
                        IssueCategory.STRUCTURAL_ERROR,
                    )
                )
            else:
                parsed.flows.append(SequenceFlow(fid, src, tgt))
        elif tag in _TASK_TAGS or tag in ("sendTask", "receiveTask"):
            if any(_local(c.tag) in _LOOP_TAGS for c in node):
                reject(node, f"loop or multi-instance activity <{tag}> is not supported")
            elif tag == "sendTask":
                add(node, NodeKind.SEND_TASK)
            elif tag == "receiveTask":
                add(node, NodeKind.RECEIVE_TASK, instantiate=node.get("instantiate") == "true")
            else:
                add(node, NodeKind.TASK)
        elif tag == "startEvent":
            defs = _event_definitions(node)
            if not defs:
                add(node, NodeKind.NONE_START)
            elif defs == ["messageEventDefinition"]:
                add(node, NodeKind.MESSAGE_START)
            else:
                reject(node, f"start event with {'/'.join(defs)} is not supported")
        elif tag == "endEvent":
            defs = _event_definitions(node)
            if not defs:
                add(node, NodeKind.NONE_END)
            elif defs == ["messageEventDefinition"]:
                add(node, NodeKind.MESSAGE_END)
            elif defs == ["terminateEventDefinition"]:
                add(node, NodeKind.TERMINATE_END)
            else:
                reject(node, f"end event with {'/'.join(defs)} is not supported")
        elif tag == "intermediateThrowEvent":
            defs = _event_definitions(node)
            if defs == ["messageEventDefinition"]:
                add(node, NodeKind.MESSAGE_THROW)
            elif defs == ["linkEventDefinition"]:
                add(node, NodeKind.LINK_THROW, link_name=_link_name(node))
            else:
                reject(node, f"intermediate throw event with {'/'.join(defs) or 'no'} definition is not supported")
        elif tag == "intermediateCatchEvent":
            defs = _event_definitions(node)
            if defs == ["messageEventDefinition"]:
                add(node, NodeKind.MESSAGE_CATCH)
            elif defs == ["linkEventDefinition"]:
                add(node, NodeKind.LINK_CATCH, link_name=_link_name(node))
            else:
                reject(node, f"intermediate catch event with {'/'.join(defs) or 'no'} definition is not supported")
        elif tag == "exclusiveGateway":
            add(node, NodeKind.EXCLUSIVE_GATEWAY)
        elif tag == "parallelGateway":
            add(node, NodeKind.PARALLEL_GATEWAY)
        elif tag == "eventBasedGateway":
            if node.get("instantiate") == "true":
                reject(node, "event-based gateway instantiation is not supported")
            else:
                add(node, NodeKind.EVENT_BASED_GATEWAY)
        elif tag in _UNSUPPORTED_TAGS:
            reject(node, f"<{tag}> is not supported")
        elif tag in _WARNED_TAGS:
            warnings.append(
                _issue(node.get("id") or tag, f"<{tag}> ignored (no control-flow semantics)")
            )
        elif tag in _SILENT_TAGS:
            continue
        else:
            reject(node, f"unsupported process element <{tag}>")
    return parsed


def _link_name(node) -> str:
    for c in node:
        if _local(c.tag) == "linkEventDefinition":
            return c.get("name") or ""
    return ""


def _parse_diagram(root) -> dict[str, tuple[float, float]]:
    coords: dict[str, tuple[float, float]] = {}
    for shape in root.iter():
        if _local(shape.tag) != "BPMNShape":
            continue
        ref = shape.get("bpmnElement")
        if not ref:
            continue
        for bounds in shape:
            if _local(bounds.tag) == "Bounds":
                try:
                    x = float(bounds.get("x", ""))
                    y = float(bounds.get("y", ""))
                    w = float(bounds.get("width", "0"))
                    h = float(bounds.get("height", "0"))
                except ValueError:
                    continue
                coords[ref] = (x + w / 2.0, y + h / 2.0)
    return coords


# --- serialization -----------------------------------------------------------

_SHAPE_SIZE = {
    NodeKind.NONE_START: (36.0, 36.0),
    NodeKind.MESSAGE_START: (36.0, 36.0),
    NodeKind.NONE_END: (36.0, 36.0),
    NodeKind.MESSAGE_END: (36.0, 36.0),
    NodeKind.TERMINATE_END: (36.0, 36.0),
    NodeKind.MESSAGE_THROW: (36.0, 36.0),
    NodeKind.MESSAGE_CATCH: (36.0, 36.0),
    NodeKind.LINK_THROW: (36.0, 36.0),
    NodeKind.LINK_CATCH: (36.0, 36.0),
    NodeKind.EXCLUSIVE_GATEWAY: (50.0, 50.0),
    NodeKind.PARALLEL_GATEWAY: (50.0, 50.0),
    NodeKind.EVENT_BASED_GATEWAY: (50.0, 50.0),
    NodeKind.TASK: (100.0, 80.0),
    NodeKind.SEND_TASK: (100.0, 80.0),
    NodeKind.RECEIVE_TASK: (100.0, 80.0),
}


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _node_element(node: FlowNode) -> ET.Element:
    kind = node.kind
    if kind is NodeKind.NONE_START or kind is NodeKind.MESSAGE_START:
        el = ET.Element("bpmn:startEvent")
    elif kind in (NodeKind.NONE_END, NodeKind.MESSAGE_END, NodeKind.TERMINATE_END):
        el = ET.Element("bpmn:endEvent")
    elif kind in (NodeKind.MESSAGE_THROW, NodeKind.LINK_THROW):
        el = ET.Element("bpmn:intermediateThrowEvent")
    elif kind in (NodeKind.MESSAGE_CATCH, NodeKind.LINK_CATCH):
        el = ET.Element("bpmn:intermediateCatchEvent")
    else:
        el = ET.Element(f"bpmn:{kind.value}")
    el.set("id", node.id)
    if node.name:
        el.set("name", node.name)
    if kind is NodeKind.RECEIVE_TASK and node.instantiate:
        el.set("instantiate", "true")
    if kind in (NodeKind.MESSAGE_START, NodeKind.MESSAGE_END, NodeKind.MESSAGE_THROW, NodeKind.MESSAGE_CATCH):
        ET.SubElement(el, "bpmn:messageEventDefinition")
    elif kind is NodeKind.TERMINATE_END:
        ET.SubElement(el, "bpmn:terminateEventDefinition")
    elif kind in (NodeKind.LINK_THROW, NodeKind.LINK_CATCH):
        link = ET.SubElement(el, "bpmn:linkEventDefinition")
        if node.link_name:
            link.set("name", node.link_name)
    return el


def serialize_bpmn(model: ProcessModel) -> str:
    """Render the model as BPMN 2.0 XML with diagram interchange data.

    Output is deterministic for a given model, so generated datasets are
    byte-stable and document diffs show only real edits.
    """
    root = ET.Element("bpmn:definitions")
    root.set("xmlns:bpmn", MODEL_NS)
    root.set("xmlns:bpmndi", DI_NS)
    root.set("xmlns:dc", DC_NS)
    root.set("xmlns:di", DD_NS)
    root.set("id", "Definitions_1")
    root.set("targetNamespace", "http://bpmn.io/schema/bpmn")

    collaborative = len(model.processes) > 1 or model.message_flows
    if collaborative:
        collab = ET.SubElement(root, "bpmn:collaboration")
        collab.set("id", "Collaboration_1")
        for p in model.processes:
            part = ET.SubElement(collab, "bpmn:participant")
            part.set("id", f"Participant_{p.id}")
            if p.name:
                part.set("name", p.name)
            part.set("processRef", p.id)
        for m in model.message_flows:
            mf = ET.SubElement(collab, "bpmn:messageFlow")
            mf.set("id", m.id)
            mf.set("sourceRef", m.source)
            mf.set("targetRef", m.target)

    for p in model.processes:
        proc = ET.SubElement(root, "bpmn:process")
        proc.set("id", p.id)
        if p.name:
            proc.set("name", p.name)
        proc.set("isExecutable", "false")
        for n in p.flow_nodes:
            proc.append(_node_element(n))
        for f in p.sequence_flows:
            fl = ET.SubElement(proc, "bpmn:sequenceFlow")
            fl.set("id", f.id)
            fl.set("sourceRef", f.source)
            fl.set("targetRef", f.target)

    diagram = ET.SubElement(root, "bpmndi:BPMNDiagram")
    diagram.set("id", "BPMNDiagram_1")
    plane = ET.SubElement(diagram, "bpmndi:BPMNPlane")
    plane.set("id", "BPMNPlane_1")
    plane.set("bpmnElement", "Collaboration_1" if collaborative else model.processes[0].id)

    def bounds(el, x, y, w, h):
        b = ET.SubElement(el, "dc:Bounds")
        b.set("x", _num(x))
        b.set("y", _num(y))
        b.set("width", _num(w))
        b.set("height", _num(h))

    if collaborative:
        for p in model.processes:
            centers = [model.diagram[n.id] for n in p.flow_nodes] or [(0.0, 0.0)]
            xs = [c[0] for c in centers]
            ys = [c[1] for c in centers]
            shape = ET.SubElement(plane, "bpmndi:BPMNShape")
            shape.set("id", f"Participant_{p.id}_di")
            shape.set("bpmnElement", f"Participant_{p.id}")
            shape.set("isHorizontal", "true")
            bounds(shape, min(xs) - 80, min(ys) - 80, max(xs) - min(xs) + 160, max(ys) - min(ys) + 160)

    for p in model.processes:
        for n in p.flow_nodes:
            cx, cy = model.diagram[n.id]
            w, h = _SHAPE_SIZE[n.kind]
            shape = ET.SubElement(plane, "bpmndi:BPMNShape")
            shape.set("id", f"{n.id}_di")
            shape.set("bpmnElement", n.id)
            bounds(shape, cx - w / 2.0, cy - h / 2.0, w, h)
        for f in p.sequence_flows:
            _edge(plane, model, f.id, f.source, f.target)
    for m in model.message_flows:
        _edge(plane, model, m.id, m.source, m.target)

    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _edge(plane, model, eid, source, target):
    edge = ET.SubElement(plane, "bpmndi:BPMNEdge")
    edge.set("id", f"{eid}_di")
    edge.set("bpmnElement", eid)
    for ref in (source, target):
        x, y = model.diagram.get(ref, (0.0, 0.0))
        wp = ET.SubElement(edge, "di:waypoint")
        wp.set("x", _num(x))
        wp.set("y", _num(y))
