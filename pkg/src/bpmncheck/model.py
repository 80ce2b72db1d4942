"""Typed in-memory representation of BPMN process models.

A model is a plain graph of processes, flow nodes, sequence flows, and
message flows, deliberately limited to the element kinds the checker can
execute.  Documents containing anything else are rejected when loaded.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class NodeKind(Enum):
    """Executable flow-node kinds."""

    NONE_START = "startEvent"
    MESSAGE_START = "messageStartEvent"
    NONE_END = "endEvent"
    MESSAGE_END = "messageEndEvent"
    TERMINATE_END = "terminateEndEvent"
    TASK = "task"
    SEND_TASK = "sendTask"
    RECEIVE_TASK = "receiveTask"
    EXCLUSIVE_GATEWAY = "exclusiveGateway"
    PARALLEL_GATEWAY = "parallelGateway"
    EVENT_BASED_GATEWAY = "eventBasedGateway"
    MESSAGE_THROW = "intermediateMessageThrowEvent"
    MESSAGE_CATCH = "intermediateMessageCatchEvent"
    LINK_THROW = "linkThrowEvent"
    LINK_CATCH = "linkCatchEvent"


START_KINDS = frozenset({NodeKind.NONE_START, NodeKind.MESSAGE_START})
END_KINDS = frozenset({NodeKind.NONE_END, NodeKind.MESSAGE_END, NodeKind.TERMINATE_END})
ACTIVITY_KINDS = frozenset({NodeKind.TASK, NodeKind.SEND_TASK, NodeKind.RECEIVE_TASK})
GATEWAY_KINDS = frozenset(
    {NodeKind.EXCLUSIVE_GATEWAY, NodeKind.PARALLEL_GATEWAY, NodeKind.EVENT_BASED_GATEWAY}
)
# Legal endpoints of a message flow.
MESSAGE_SOURCE_KINDS = frozenset(
    {NodeKind.SEND_TASK, NodeKind.MESSAGE_THROW, NodeKind.MESSAGE_END}
)
MESSAGE_TARGET_KINDS = frozenset(
    {NodeKind.RECEIVE_TASK, NodeKind.MESSAGE_CATCH, NodeKind.MESSAGE_START}
)
# Elements allowed after an event-based gateway.
EVENT_GATEWAY_ARM_KINDS = frozenset({NodeKind.MESSAGE_CATCH, NodeKind.RECEIVE_TASK})


class IssueCategory(Enum):
    UNSUPPORTED_ELEMENT = "UnsupportedElement"
    STRUCTURAL_ERROR = "StructuralError"


@dataclass(frozen=True)
class ModelIssue:
    """A defect found while loading or validating a document."""

    element_id: str
    category: IssueCategory
    detail: str

    def __str__(self) -> str:
        return f"{self.category.value}: {self.element_id}: {self.detail}"


class ModelError(Exception):
    """Raised by :func:`build_model` when the structure is invalid."""

    def __init__(self, issues: Sequence[ModelIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class FlowNode:
    id: str
    kind: NodeKind
    name: str = ""
    incoming: tuple[str, ...] = ()
    outgoing: tuple[str, ...] = ()
    instantiate: bool = False  # receive tasks only
    link_name: str = ""  # link events only


@dataclass(frozen=True)
class SequenceFlow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class MessageFlow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Process:
    id: str
    flow_nodes: tuple[FlowNode, ...] = ()
    sequence_flows: tuple[SequenceFlow, ...] = ()
    name: str = ""

    @cached_property
    def node_by_id(self) -> dict[str, FlowNode]:
        return {n.id: n for n in self.flow_nodes}

    @cached_property
    def flow_by_id(self) -> dict[str, SequenceFlow]:
        return {f.id: f for f in self.sequence_flows}


@dataclass(frozen=True, eq=False)
class ProcessModel:
    """Validated, immutable process model.

    Identity semantics (``eq=False``) keep the model cheap to use as a cache
    key; use :meth:`structurally_equal` to compare content.
    """

    processes: tuple[Process, ...]
    message_flows: tuple[MessageFlow, ...] = ()
    diagram: dict[str, tuple[float, float]] = field(default_factory=dict)
    missing_coords: frozenset[str] = frozenset()
    warnings: tuple[ModelIssue, ...] = ()

    @cached_property
    def process_by_id(self) -> dict[str, Process]:
        return {p.id: p for p in self.processes}

    @cached_property
    def nodes_by_id(self) -> dict[str, FlowNode]:
        return {n.id: n for p in self.processes for n in p.flow_nodes}

    @cached_property
    def node_process(self) -> dict[str, str]:
        return {n.id: p.id for p in self.processes for n in p.flow_nodes}

    @cached_property
    def flows_by_id(self) -> dict[str, SequenceFlow]:
        return {f.id: f for p in self.processes for f in p.sequence_flows}

    @cached_property
    def flow_process(self) -> dict[str, str]:
        return {f.id: p.id for p in self.processes for f in p.sequence_flows}

    @cached_property
    def message_flows_by_id(self) -> dict[str, MessageFlow]:
        return {m.id: m for m in self.message_flows}

    def node(self, node_id: str) -> FlowNode:
        return self.nodes_by_id[node_id]

    def flow(self, flow_id: str) -> SequenceFlow:
        return self.flows_by_id[flow_id]

    def coordinates(self, element_id: str) -> tuple[float, float]:
        return self.diagram[element_id]

    def has_layout(self, element_id: str) -> bool:
        """True when the element carries real (not defaulted) coordinates."""
        return element_id in self.diagram and element_id not in self.missing_coords

    def activity_ids(self) -> list[str]:
        return [n.id for p in self.processes for n in p.flow_nodes if n.kind in ACTIVITY_KINDS]

    def structurally_equal(self, other: "ProcessModel") -> bool:
        """Content equality on IDs, kinds, names, flows, and coordinates."""
        if set(self.process_by_id) != set(other.process_by_id):
            return False
        for pid, p in self.process_by_id.items():
            q = other.process_by_id[pid]
            if set(p.node_by_id) != set(q.node_by_id):
                return False
            for nid, a in p.node_by_id.items():
                b = q.node_by_id[nid]
                if (a.kind, a.name, a.instantiate, a.link_name) != (
                    b.kind,
                    b.name,
                    b.instantiate,
                    b.link_name,
                ):
                    return False
                if set(a.incoming) != set(b.incoming) or set(a.outgoing) != set(b.outgoing):
                    return False
            if set(p.flow_by_id) != set(q.flow_by_id):
                return False
            for fid, fa in p.flow_by_id.items():
                fb = q.flow_by_id[fid]
                if (fa.source, fa.target) != (fb.source, fb.target):
                    return False
        if set(self.message_flows_by_id) != set(other.message_flows_by_id):
            return False
        for mid, ma in self.message_flows_by_id.items():
            mb = other.message_flows_by_id[mid]
            if (ma.source, ma.target) != (mb.source, mb.target):
                return False
        for nid in self.nodes_by_id:
            if self.diagram.get(nid) != other.diagram.get(nid):
                return False
        return True


def _derive_flow_links(process: Process) -> Process:
    """Rebuild every node's incoming/outgoing lists from the sequence flows."""
    incoming: dict[str, list[str]] = {n.id: [] for n in process.flow_nodes}
    outgoing: dict[str, list[str]] = {n.id: [] for n in process.flow_nodes}
    for f in process.sequence_flows:
        if f.source in outgoing:
            outgoing[f.source].append(f.id)
        if f.target in incoming:
            incoming[f.target].append(f.id)
    nodes = tuple(
        replace(n, incoming=tuple(incoming[n.id]), outgoing=tuple(outgoing[n.id]))
        for n in process.flow_nodes
    )
    return replace(process, flow_nodes=nodes)


def validate_structure(
    processes: Sequence[Process],
    message_flows: Sequence[MessageFlow],
    known_foreign_ids: frozenset[str] = frozenset(),
) -> list[ModelIssue]:
    """Check the structural invariants; returns errors in document order.

    ``known_foreign_ids`` are IDs that existed in the source document but were
    not materialized (unsupported elements); references to them are not
    reported again as dangling.
    """
    issues: list[ModelIssue] = []
    err = lambda eid, msg: issues.append(ModelIssue(eid, IssueCategory.STRUCTURAL_ERROR, msg))

    seen: set[str] = set()
    for p in processes:
        for eid in [p.id, *(n.id for n in p.flow_nodes), *(f.id for f in p.sequence_flows)]:
            if not eid:
                err(eid or p.id, "element without an id")
            elif eid in seen:
                err(eid, "duplicate element id")
            seen.add(eid)
    for m in message_flows:
        if m.id in seen:
            err(m.id, "duplicate element id")
        seen.add(m.id)

    all_nodes: dict[str, FlowNode] = {}
    node_proc: dict[str, str] = {}
    for p in processes:
        for n in p.flow_nodes:
            all_nodes.setdefault(n.id, n)
            node_proc.setdefault(n.id, p.id)

    for p in processes:
        local = p.node_by_id
        for f in p.sequence_flows:
            for ref, role in ((f.source, "source"), (f.target, "target")):
                if ref not in local and ref not in known_foreign_ids:
                    err(f.id, f"sequence flow {role} '{ref}' does not resolve in process '{p.id}'")
        for n in p.flow_nodes:
            if n.kind in START_KINDS and n.incoming:
                err(n.id, "start event must not have incoming sequence flows")
            if n.kind in END_KINDS and n.outgoing:
                err(n.id, "end event must not have outgoing sequence flows")
            if n.kind is NodeKind.EVENT_BASED_GATEWAY:
                for fid in n.outgoing:
                    flow = p.flow_by_id.get(fid)
                    target = local.get(flow.target) if flow else None
                    if target is not None and target.kind not in EVENT_GATEWAY_ARM_KINDS:
                        err(
                            n.id,
                            f"event-based gateway branch '{fid}' must target a message catch "
                            f"event or receive task, not '{target.id}'",
                        )
        catches: dict[str, list[str]] = {}
        for n in p.flow_nodes:
            if n.kind is NodeKind.LINK_CATCH:
                catches.setdefault(n.link_name, []).append(n.id)
        for n in p.flow_nodes:
            if n.kind is NodeKind.LINK_THROW:
                matches = catches.get(n.link_name, [])
                if len(matches) != 1:
                    err(
                        n.id,
                        f"link throw event '{n.link_name}' needs exactly one matching link "
                        f"catch event in the same process, found {len(matches)}",
                    )
        instantiable = any(
            n.kind in START_KINDS or (n.kind is NodeKind.RECEIVE_TASK and n.instantiate)
            for n in p.flow_nodes
        )
        if not instantiable:
            err(p.id, "process has no start event and no instantiating receive task")

    for m in message_flows:
        src = all_nodes.get(m.source)
        tgt = all_nodes.get(m.target)
        for ref, node, role in ((m.source, src, "source"), (m.target, tgt, "target")):
            if node is None and ref not in known_foreign_ids:
                err(m.id, f"message flow {role} '{ref}' does not resolve")
        if src is not None and src.kind not in MESSAGE_SOURCE_KINDS:
            err(m.id, f"message flow source '{src.id}' cannot send messages ({src.kind.value})")
        if tgt is not None and tgt.kind not in MESSAGE_TARGET_KINDS:
            err(m.id, f"message flow target '{tgt.id}' cannot receive messages ({tgt.kind.value})")
        if src is not None and tgt is not None and node_proc[src.id] == node_proc[tgt.id]:
            err(m.id, "message flow must connect different processes")

    return issues


def build_model(
    processes: Iterable[Process],
    message_flows: Iterable[MessageFlow] = (),
    diagram: Mapping[str, tuple[float, float]] | None = None,
    warnings: Iterable[ModelIssue] = (),
) -> ProcessModel:
    """Normalize, validate, and freeze a model.

    Node incoming/outgoing lists are derived from the sequence flows, so
    callers only provide nodes and flows.  Flow nodes without diagram
    coordinates default to (0, 0) and are flagged, which suppresses
    proximity-based fixes for them.  Raises :class:`ModelError` on structural
    errors.
    """
    procs = tuple(_derive_flow_links(p) for p in processes)
    mflows = tuple(message_flows)
    issues = validate_structure(procs, mflows)
    if issues:
        raise ModelError(issues)

    coords: dict[str, tuple[float, float]] = {}
    missing: set[str] = set()
    warn = list(warnings)
    source = dict(diagram) if diagram else {}
    for p in procs:
        for n in p.flow_nodes:
            if n.id in source:
                x, y = source[n.id]
                coords[n.id] = (float(x), float(y))
            else:
                coords[n.id] = (0.0, 0.0)
                missing.add(n.id)
                warn.append(
                    ModelIssue(
                        n.id,
                        IssueCategory.STRUCTURAL_ERROR,
                        "no diagram coordinates; defaulted to (0, 0)",
                    )
                )
    return ProcessModel(
        processes=procs,
        message_flows=mflows,
        diagram=coords,
        missing_coords=frozenset(missing),
        warnings=tuple(warn),
    )
