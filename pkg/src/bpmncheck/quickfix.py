"""Violation diagnosis and invertible model repairs.

Fixes are declarative edit lists bound to a concrete violation.  Suggesting
never mutates the model; :func:`apply_fix` applies all edits atomically on a
copy and returns both the edited model and an inverse fix that undoes the
whole repair in one application.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, Union

from .checker import CheckResult, Counterexample, Property
from .model import (
    END_KINDS,
    MESSAGE_SOURCE_KINDS,
    START_KINDS,
    FlowNode,
    MessageFlow,
    ModelError,
    NodeKind,
    Process,
    ProcessModel,
    SequenceFlow,
    build_model,
)
from .semantics import PRODUCE_ALL_KINDS


class StaleFixError(Exception):
    """The fix references elements that no longer exist in this revision."""


# --- edits -------------------------------------------------------------------


@dataclass(frozen=True)
class ChangeGatewayKind:
    gateway_id: str
    new_kind: NodeKind


@dataclass(frozen=True)
class InsertGateway:
    kind: NodeKind
    node_id: str
    placement: str  # "before" rewires the node's incoming, "after" its outgoing
    rewired_flow_ids: tuple[str, ...]
    gateway_id: str
    connecting_flow_id: str


@dataclass(frozen=True)
class RemoveInsertedGateway:
    gateway_id: str
    kind: NodeKind
    node_id: str
    placement: str
    rewired_flow_ids: tuple[str, ...]
    connecting_flow_id: str


@dataclass(frozen=True)
class AddEndEvent:
    flow_id: str  # incoming flow retargeted to the new end event
    end_event_id: str


@dataclass(frozen=True)
class RemoveEndEvent:
    end_event_id: str
    flow_id: str
    original_target: str


@dataclass(frozen=True)
class AddSequenceFlow:
    source: str
    target: str
    flow_id: str


@dataclass(frozen=True)
class RemoveSequenceFlow:
    flow_id: str
    source: str
    target: str


@dataclass(frozen=True)
class AddMessageFlow:
    source: str
    target: str
    flow_id: str


@dataclass(frozen=True)
class RemoveMessageFlow:
    flow_id: str
    source: str
    target: str


Edit = Union[
    ChangeGatewayKind,
    InsertGateway,
    RemoveInsertedGateway,
    AddEndEvent,
    RemoveEndEvent,
    AddSequenceFlow,
    RemoveSequenceFlow,
    AddMessageFlow,
    RemoveMessageFlow,
]

_EDIT_TYPES = {
    ChangeGatewayKind: "changeGatewayKind",
    InsertGateway: "insertGateway",
    RemoveInsertedGateway: "removeInsertedGateway",
    AddEndEvent: "addEndEvent",
    RemoveEndEvent: "removeEndEvent",
    AddSequenceFlow: "addSequenceFlow",
    RemoveSequenceFlow: "removeSequenceFlow",
    AddMessageFlow: "addMessageFlow",
    RemoveMessageFlow: "removeMessageFlow",
}


def edit_to_wire(edit: Edit) -> dict:
    if isinstance(edit, ChangeGatewayKind):
        return {"type": "changeGatewayKind", "gatewayId": edit.gateway_id, "newKind": edit.new_kind.value}
    if isinstance(edit, InsertGateway):
        return {
            "type": "insertGateway",
            "kind": edit.kind.value,
            "nodeId": edit.node_id,
            "placement": edit.placement,
            "rewiredFlowIds": list(edit.rewired_flow_ids),
            "gatewayId": edit.gateway_id,
            "connectingFlowId": edit.connecting_flow_id,
        }
    if isinstance(edit, RemoveInsertedGateway):
        return {
            "type": "removeInsertedGateway",
            "gatewayId": edit.gateway_id,
            "kind": edit.kind.value,
            "nodeId": edit.node_id,
            "placement": edit.placement,
            "rewiredFlowIds": list(edit.rewired_flow_ids),
            "connectingFlowId": edit.connecting_flow_id,
        }
    if isinstance(edit, AddEndEvent):
        return {"type": "addEndEvent", "flowId": edit.flow_id, "endEventId": edit.end_event_id}
    if isinstance(edit, RemoveEndEvent):
        return {
            "type": "removeEndEvent",
            "endEventId": edit.end_event_id,
            "flowId": edit.flow_id,
            "originalTarget": edit.original_target,
        }
    if isinstance(edit, AddSequenceFlow):
        return {"type": "addSequenceFlow", "sourceId": edit.source, "targetId": edit.target, "flowId": edit.flow_id}
    if isinstance(edit, RemoveSequenceFlow):
        return {"type": "removeSequenceFlow", "flowId": edit.flow_id, "sourceId": edit.source, "targetId": edit.target}
    if isinstance(edit, AddMessageFlow):
        return {"type": "addMessageFlow", "sourceId": edit.source, "targetId": edit.target, "flowId": edit.flow_id}
    if isinstance(edit, RemoveMessageFlow):
        return {"type": "removeMessageFlow", "flowId": edit.flow_id, "sourceId": edit.source, "targetId": edit.target}
    raise TypeError(f"unknown edit {edit!r}")


def edit_from_wire(data: dict) -> Edit:
    try:
        kind = data["type"]
        if kind == "changeGatewayKind":
            return ChangeGatewayKind(data["gatewayId"], NodeKind(data["newKind"]))
        if kind == "insertGateway":
            return InsertGateway(
                NodeKind(data["kind"]),
                data["nodeId"],
                data["placement"],
                tuple(data["rewiredFlowIds"]),
                data["gatewayId"],
                data["connectingFlowId"],
            )
        if kind == "removeInsertedGateway":
            return RemoveInsertedGateway(
                data["gatewayId"],
                NodeKind(data["kind"]),
                data["nodeId"],
                data["placement"],
                tuple(data["rewiredFlowIds"]),
                data["connectingFlowId"],
            )
        if kind == "addEndEvent":
            return AddEndEvent(data["flowId"], data["endEventId"])
        if kind == "removeEndEvent":
            return RemoveEndEvent(data["endEventId"], data["flowId"], data["originalTarget"])
        if kind == "addSequenceFlow":
            return AddSequenceFlow(data["sourceId"], data["targetId"], data["flowId"])
        if kind == "removeSequenceFlow":
            return RemoveSequenceFlow(data["flowId"], data["sourceId"], data["targetId"])
        if kind == "addMessageFlow":
            return AddMessageFlow(data["sourceId"], data["targetId"], data["flowId"])
        if kind == "removeMessageFlow":
            return RemoveMessageFlow(data["flowId"], data["sourceId"], data["targetId"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ValueError(f"invalid edit payload: {data!r}") from exc
    raise ValueError(f"unknown edit type {kind!r}")


@dataclass(frozen=True)
class QuickFix:
    id: str
    target_property: Property
    anchor_element: str
    edits: tuple[Edit, ...]
    rationale: str
    strategy: str


def _fix_id(strategy: str, anchor: str, edits: Iterable[Edit]) -> str:
    payload = json.dumps(
        [strategy, anchor, [edit_to_wire(e) for e in edits]], sort_keys=True, separators=(",", ":")
    )
    return "fix-" + hashlib.sha1(payload.encode()).hexdigest()[:10]


def _make_fix(strategy, prop, anchor, edits, rationale) -> QuickFix:
    edits = tuple(edits)
    return QuickFix(_fix_id(strategy, anchor, edits), prop, anchor, edits, rationale, strategy)


# --- suggestion --------------------------------------------------------------


def suggest_fixes(model: ProcessModel, result: CheckResult) -> list[QuickFix]:
    """All applicable repairs for the violations in ``result``.

    Returns an empty list when no strategy matches; not every violation has a
    known repair.
    """
    fixes: dict[str, QuickFix] = {}

    def offer(fix: QuickFix | None):
        if fix is not None and fix.id not in fixes:
            fixes[fix.id] = fix

    if result.violated(Property.SAFENESS):
        for fix in _safeness_fixes(model, result):
            offer(fix)
    if result.violated(Property.PROPER_COMPLETION):
        for fix in _proper_completion_fixes(model, result):
            offer(fix)
    if result.violated(Property.OPTION_TO_COMPLETE):
        for fix in _option_to_complete_fixes(model, result):
            offer(fix)
    if result.violated(Property.NO_DEAD_ACTIVITIES):
        for fix in _dead_activity_fixes(model, result):
            offer(fix)
    return list(fixes.values())


def _safeness_fixes(model: ProcessModel, result: CheckResult) -> list[QuickFix]:
    ce = result.counterexamples.get(Property.SAFENESS)
    return _unsafe_flow_fixes(model, sorted(result.unsafe_flow_ids), ce, Property.SAFENESS)


def _unsafe_flow_fixes(
    model: ProcessModel,
    unsafe_flow_ids: Iterable[str],
    ce: Counterexample | None,
    prop: Property,
) -> list[QuickFix]:
    out: list[QuickFix] = []
    merge_ids: set[str] = set()
    for fid in unsafe_flow_ids:
        flow = model.flows_by_id.get(fid)
        if flow is not None and flow.source in model.nodes_by_id:
            merge_ids.add(flow.source)

    trace_sources = _trace_merge_candidates(model, ce) if ce is not None else []
    merge_ids.update(trace_sources)

    for merge_id in sorted(merge_ids):
        merge = model.nodes_by_id[merge_id]
        if len(merge.incoming) >= 2:
            out.extend(_merge_side_fix(model, merge, prop))

    # The split walk needs the merge the duplicated paths converge on; prefer
    # a real merge point over a pass-through node.
    target = next(
        (s for s in trace_sources if len(model.nodes_by_id[s].incoming) >= 2),
        trace_sources[0] if trace_sources else None,
    )
    if target is not None and ce is not None:
        split = _causing_split(model, ce, target, PRODUCE_ALL_KINDS)
        if split is not None:
            out.extend(_split_to_exclusive_fix(model, split, prop))
    return out


def _merge_side_fix(model: ProcessModel, merge: FlowNode, prop: Property) -> list[QuickFix]:
    if merge.kind is NodeKind.EXCLUSIVE_GATEWAY:
        return [
            _make_fix(
                "merge-to-parallel",
                prop,
                merge.id,
                [ChangeGatewayKind(merge.id, NodeKind.PARALLEL_GATEWAY)],
                f"Change exclusive gateway '{merge.id}' to a parallel gateway so the "
                f"incoming branches are synchronized instead of merged one by one.",
            )
        ]
    if merge.kind is NodeKind.PARALLEL_GATEWAY:
        return []
    gateway_id = _fresh_id(model, f"{merge.id}_join")
    flow_id = _fresh_id(model, f"{merge.id}_join_flow")
    return [
        _make_fix(
            "explicit-parallel-join",
            prop,
            merge.id,
            [
                InsertGateway(
                    NodeKind.PARALLEL_GATEWAY,
                    merge.id,
                    "before",
                    merge.incoming,
                    gateway_id,
                    flow_id,
                )
            ],
            f"Insert an explicit parallel gateway before '{merge.id}' so its incoming "
            f"branches are synchronized instead of implicitly merged.",
        )
    ]


def _split_to_exclusive_fix(model: ProcessModel, split: FlowNode, prop: Property) -> list[QuickFix]:
    if split.kind is NodeKind.PARALLEL_GATEWAY:
        return [
            _make_fix(
                "split-to-exclusive",
                prop,
                split.id,
                [ChangeGatewayKind(split.id, NodeKind.EXCLUSIVE_GATEWAY)],
                f"Change parallel gateway '{split.id}' to an exclusive gateway; the "
                f"parallelization it introduces is never synchronized.",
            )
        ]
    gateway_id = _fresh_id(model, f"{split.id}_split")
    flow_id = _fresh_id(model, f"{split.id}_split_flow")
    return [
        _make_fix(
            "explicit-exclusive-split",
            prop,
            split.id,
            [
                InsertGateway(
                    NodeKind.EXCLUSIVE_GATEWAY,
                    split.id,
                    "after",
                    split.outgoing,
                    gateway_id,
                    flow_id,
                )
            ],
            f"Insert an explicit exclusive gateway after '{split.id}' to remove the "
            f"implicit parallelization of its outgoing flows.",
        )
    ]


def _proper_completion_fixes(model: ProcessModel, result: CheckResult) -> list[QuickFix]:
    out: list[QuickFix] = []
    ce = result.counterexamples.get(Property.PROPER_COMPLETION)
    for end_id in sorted(result.improper_end_event_ids):
        end = model.nodes_by_id.get(end_id)
        if end is None:
            continue
        if len(end.incoming) >= 2:
            edits = []
            for fid in end.incoming[1:]:
                edits.append(AddEndEvent(fid, _fresh_id(model, f"{end_id}_for_{fid}")))
            out.append(
                _make_fix(
                    "one-end-event-per-flow",
                    Property.PROPER_COMPLETION,
                    end_id,
                    edits,
                    f"Add {len(edits)} end event(s) so every flow into '{end_id}' ends in "
                    f"its own end event.",
                )
            )
        elif end.incoming:
            # A single unsafe incoming flow doubles the end event; the repair
            # is whatever removes the duplication upstream.
            out.extend(_unsafe_flow_fixes(model, [end.incoming[0]], ce, Property.PROPER_COMPLETION))
    return out


def _option_to_complete_fixes(model: ProcessModel, result: CheckResult) -> list[QuickFix]:
    ce = result.counterexamples.get(Property.OPTION_TO_COMPLETE)
    if ce is None:
        return []
    final = ce.violating_state
    out: list[QuickFix] = []
    seen_nodes: set[str] = set()
    for snap in final.snapshots:
        token_map = dict(snap.token_items())
        for fid, _count in snap.token_items():
            flow = model.flows_by_id.get(fid)
            node = model.nodes_by_id.get(flow.target) if flow else None
            if node is None or node.id in seen_nodes:
                continue
            seen_nodes.add(node.id)
            if node.kind is NodeKind.PARALLEL_GATEWAY and not all(
                token_map.get(f, 0) > 0 for f in node.incoming
            ):
                out.append(
                    _make_fix(
                        "join-to-exclusive",
                        Property.OPTION_TO_COMPLETE,
                        node.id,
                        [ChangeGatewayKind(node.id, NodeKind.EXCLUSIVE_GATEWAY)],
                        f"Change parallel gateway '{node.id}' to an exclusive gateway; it "
                        f"waits for branches that never all arrive.",
                    )
                )
                split = _causing_split(model, ce, node.id, frozenset({NodeKind.EXCLUSIVE_GATEWAY}))
                if split is not None:
                    out.append(
                        _make_fix(
                            "split-to-parallel",
                            Property.OPTION_TO_COMPLETE,
                            split.id,
                            [ChangeGatewayKind(split.id, NodeKind.PARALLEL_GATEWAY)],
                            f"Change exclusive gateway '{split.id}' to a parallel gateway so "
                            f"all branches joined at '{node.id}' actually run.",
                        )
                    )
            elif node.kind in (NodeKind.MESSAGE_CATCH, NodeKind.RECEIVE_TASK):
                out.extend(_missing_message_fix(model, node, Property.OPTION_TO_COMPLETE))
            elif node.kind is NodeKind.EVENT_BASED_GATEWAY:
                for fid2 in node.outgoing:
                    arm_flow = model.flows_by_id.get(fid2)
                    arm = model.nodes_by_id.get(arm_flow.target) if arm_flow else None
                    if arm is not None:
                        out.extend(_missing_message_fix(model, arm, Property.OPTION_TO_COMPLETE))
    return out


def _missing_message_fix(model: ProcessModel, node: FlowNode, prop: Property) -> list[QuickFix]:
    if any(m.target == node.id for m in model.message_flows):
        return []
    sender = _nearest_sender(model, node)
    if sender is None:
        return []
    flow_id = _fresh_id(model, f"mf_{sender.id}_{node.id}")
    return [
        _make_fix(
            "add-message-flow",
            prop,
            node.id,
            [AddMessageFlow(sender.id, node.id, flow_id)],
            f"Add a message flow from '{sender.id}' so '{node.id}' can actually be "
            f"triggered ('{sender.id}' is the closest message source).",
        )
    ]


def _dead_activity_fixes(model: ProcessModel, result: CheckResult) -> list[QuickFix]:
    out: list[QuickFix] = []
    dead = result.dead_activity_ids
    for dead_id in sorted(dead):
        node = model.nodes_by_id.get(dead_id)
        if node is None:
            continue
        if not node.incoming:
            source = _nearest_flow_source(model, node, dead)
            if source is not None:
                flow_id = _fresh_id(model, f"sf_{source.id}_{node.id}")
                out.append(
                    _make_fix(
                        "connect-dead-activity",
                        Property.NO_DEAD_ACTIVITIES,
                        dead_id,
                        [AddSequenceFlow(source.id, node.id, flow_id)],
                        f"Add a sequence flow from '{source.id}' (nearest connected, live "
                        f"node) so '{dead_id}' becomes reachable.",
                    )
                )
        elif node.kind is NodeKind.RECEIVE_TASK:
            out.extend(_missing_message_fix(model, node, Property.NO_DEAD_ACTIVITIES))
        # Otherwise the activity sits behind an unexecutable region; the
        # option-to-complete fixes are the ones that can help.
    return out


# --- suggestion helpers ------------------------------------------------------


def _trace_merge_candidates(model: ProcessModel, ce: Counterexample) -> list[str]:
    """Sources of unsafe flows anywhere along ``ce``, most recent first.

    The violating state itself may no longer be unsafe (an end event can
    swallow the doubled tokens before the trace ends), so the whole trace is
    scanned backward.
    """
    from .checker import unsafe_flows

    found: list[str] = []
    states = [ce.violating_state] + [step.successor for step in reversed(ce.steps)]
    for state in states:
        for fid in sorted(unsafe_flows(state)):
            flow = model.flows_by_id.get(fid)
            if flow is not None and flow.source in model.nodes_by_id and flow.source not in found:
                found.append(flow.source)
    return found


def _causing_split(
    model: ProcessModel, ce: Counterexample, merge_id: str, kinds: frozenset[NodeKind]
) -> FlowNode | None:
    """Most recent executed node that opened 2+ concurrent paths to ``merge_id``."""
    pid = model.node_process.get(merge_id)
    for step in reversed(ce.steps):
        node = model.nodes_by_id.get(step.executed_element)
        if node is None or node.id == merge_id:
            continue
        if model.node_process.get(node.id) != pid:
            continue
        if node.kind not in kinds or len(node.outgoing) < 2:
            continue
        reaching = sum(1 for fid in node.outgoing if _flow_reaches(model, fid, merge_id))
        if reaching >= 2:
            return node
    return None


def _flow_reaches(model: ProcessModel, flow_id: str, target_id: str) -> bool:
    flow = model.flows_by_id.get(flow_id)
    if flow is None:
        return False
    pid = model.flow_process[flow_id]
    process = model.process_by_id[pid]
    link_catches = {
        n.link_name: n.id for n in process.flow_nodes if n.kind is NodeKind.LINK_CATCH
    }
    frontier = [flow.target]
    visited: set[str] = set()
    while frontier:
        nid = frontier.pop()
        if nid == target_id:
            return True
        if nid in visited:
            continue
        visited.add(nid)
        node = process.node_by_id.get(nid)
        if node is None:
            continue
        if node.kind is NodeKind.LINK_THROW:
            catch = link_catches.get(node.link_name)
            if catch is not None:
                frontier.append(catch)
            continue
        for fid in node.outgoing:
            nxt = process.flow_by_id.get(fid)
            if nxt is not None:
                frontier.append(nxt.target)
    return False


def _distance(model: ProcessModel, a: str, b: str) -> float:
    (x1, y1), (x2, y2) = model.diagram[a], model.diagram[b]
    return math.hypot(x1 - x2, y1 - y2)


def _nearest(model: ProcessModel, target: str, candidates: Iterable[FlowNode]) -> FlowNode | None:
    if not model.has_layout(target):
        return None
    placed = [c for c in candidates if model.has_layout(c.id)]
    if not placed:
        return None
    return min(placed, key=lambda c: (_distance(model, c.id, target), c.id))


def _nearest_sender(model: ProcessModel, node: FlowNode) -> FlowNode | None:
    pid = model.node_process[node.id]
    candidates = [
        n
        for p in model.processes
        if p.id != pid
        for n in p.flow_nodes
        if n.kind in MESSAGE_SOURCE_KINDS
    ]
    return _nearest(model, node.id, candidates)


def _nearest_flow_source(
    model: ProcessModel, node: FlowNode, dead: frozenset[str]
) -> FlowNode | None:
    pid = model.node_process[node.id]
    process = model.process_by_id[pid]
    candidates = []
    for n in process.flow_nodes:
        if n.id == node.id or n.id in dead or n.kind in END_KINDS:
            continue
        # Link throws hand their token to the matching catch, and event-based
        # gateways may only feed catching elements; neither can feed a task.
        if n.kind in (NodeKind.LINK_THROW, NodeKind.EVENT_BASED_GATEWAY):
            continue
        disconnected = not n.incoming and n.kind not in START_KINDS and not (
            n.kind is NodeKind.RECEIVE_TASK and n.instantiate
        )
        if disconnected:
            continue
        candidates.append(n)
    return _nearest(model, node.id, candidates)


def _fresh_id(model: ProcessModel, base: str) -> str:
    taken = set(model.nodes_by_id) | set(model.flows_by_id) | set(model.message_flows_by_id)
    taken.update(p.id for p in model.processes)
    if base not in taken:
        return base
    i = 2
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


# --- application -------------------------------------------------------------


class _Workspace:
    """Mutable copy of a model for atomic edit application."""

    def __init__(self, model: ProcessModel):
        self.nodes: dict[str, dict[str, FlowNode]] = {}
        self.flows: dict[str, dict[str, SequenceFlow]] = {}
        self.proc_names: dict[str, str] = {}
        self.node_proc: dict[str, str] = {}
        for p in model.processes:
            self.nodes[p.id] = {n.id: n for n in p.flow_nodes}
            self.flows[p.id] = {f.id: f for f in p.sequence_flows}
            self.proc_names[p.id] = p.name
            for n in p.flow_nodes:
                self.node_proc[n.id] = p.id
        self.message_flows: dict[str, MessageFlow] = {m.id: m for m in model.message_flows}
        self.coords: dict[str, tuple[float, float]] = dict(model.diagram)

    def node(self, node_id: str) -> FlowNode | None:
        pid = self.node_proc.get(node_id)
        return self.nodes[pid].get(node_id) if pid else None

    def flow(self, flow_id: str) -> tuple[str, SequenceFlow] | None:
        for pid, flows in self.flows.items():
            if flow_id in flows:
                return pid, flows[flow_id]
        return None

    def taken_ids(self) -> set[str]:
        ids = set(self.node_proc) | set(self.message_flows) | set(self.nodes)
        for flows in self.flows.values():
            ids.update(flows)
        return ids

    def center(self, element_id: str) -> tuple[float, float]:
        return self.coords.get(element_id, (0.0, 0.0))

    def apply(self, edit: Edit) -> Edit:
        if isinstance(edit, ChangeGatewayKind):
            return self._change_gateway(edit)
        if isinstance(edit, InsertGateway):
            return self._insert_gateway(edit)
        if isinstance(edit, RemoveInsertedGateway):
            return self._remove_gateway(edit)
        if isinstance(edit, AddEndEvent):
            return self._add_end_event(edit)
        if isinstance(edit, RemoveEndEvent):
            return self._remove_end_event(edit)
        if isinstance(edit, AddSequenceFlow):
            return self._add_sequence_flow(edit)
        if isinstance(edit, RemoveSequenceFlow):
            return self._remove_sequence_flow(edit)
        if isinstance(edit, AddMessageFlow):
            return self._add_message_flow(edit)
        if isinstance(edit, RemoveMessageFlow):
            return self._remove_message_flow(edit)
        raise TypeError(f"unknown edit {edit!r}")

    def _require_node(self, node_id: str) -> FlowNode:
        node = self.node(node_id)
        if node is None:
            raise StaleFixError(f"element '{node_id}' no longer exists")
        return node

    def _require_free(self, element_id: str):
        if element_id in self.taken_ids():
            raise StaleFixError(f"id '{element_id}' is already taken")

    def _change_gateway(self, edit: ChangeGatewayKind) -> Edit:
        node = self._require_node(edit.gateway_id)
        if node.kind not in (NodeKind.EXCLUSIVE_GATEWAY, NodeKind.PARALLEL_GATEWAY):
            raise StaleFixError(f"'{edit.gateway_id}' is not a convertible gateway")
        if edit.new_kind not in (NodeKind.EXCLUSIVE_GATEWAY, NodeKind.PARALLEL_GATEWAY):
            raise StaleFixError(f"cannot convert a gateway to {edit.new_kind.value}")
        pid = self.node_proc[node.id]
        self.nodes[pid][node.id] = replace(node, kind=edit.new_kind)
        return ChangeGatewayKind(edit.gateway_id, node.kind)

    def _insert_gateway(self, edit: InsertGateway) -> Edit:
        node = self._require_node(edit.node_id)
        pid = self.node_proc[node.id]
        self._require_free(edit.gateway_id)
        self._require_free(edit.connecting_flow_id)
        flows = self.flows[pid]
        anchors: list[str] = []
        for fid in edit.rewired_flow_ids:
            flow = flows.get(fid)
            if flow is None:
                raise StaleFixError(f"flow '{fid}' no longer exists in process '{pid}'")
            endpoint = flow.target if edit.placement == "before" else flow.source
            if endpoint != edit.node_id:
                raise StaleFixError(f"flow '{fid}' is no longer attached to '{edit.node_id}'")
            anchors.append(flow.source if edit.placement == "before" else flow.target)

        self.nodes[pid][edit.gateway_id] = FlowNode(edit.gateway_id, edit.kind)
        self.node_proc[edit.gateway_id] = pid
        for fid in edit.rewired_flow_ids:
            flow = flows[fid]
            if edit.placement == "before":
                flows[fid] = replace(flow, target=edit.gateway_id)
            else:
                flows[fid] = replace(flow, source=edit.gateway_id)
        if edit.placement == "before":
            flows[edit.connecting_flow_id] = SequenceFlow(
                edit.connecting_flow_id, edit.gateway_id, edit.node_id
            )
        else:
            flows[edit.connecting_flow_id] = SequenceFlow(
                edit.connecting_flow_id, edit.node_id, edit.gateway_id
            )

        # Placed halfway between the rewired flows' far ends and the node.
        nx, ny = self.center(edit.node_id)
        if anchors:
            ax = sum(self.center(a)[0] for a in anchors) / len(anchors)
            ay = sum(self.center(a)[1] for a in anchors) / len(anchors)
        else:
            ax, ay = nx, ny
        self.coords[edit.gateway_id] = ((ax + nx) / 2.0, (ay + ny) / 2.0)

        return RemoveInsertedGateway(
            edit.gateway_id,
            edit.kind,
            edit.node_id,
            edit.placement,
            edit.rewired_flow_ids,
            edit.connecting_flow_id,
        )

    def _remove_gateway(self, edit: RemoveInsertedGateway) -> Edit:
        gateway = self._require_node(edit.gateway_id)
        self._require_node(edit.node_id)
        pid = self.node_proc[edit.gateway_id]
        flows = self.flows[pid]
        if edit.connecting_flow_id not in flows:
            raise StaleFixError(f"flow '{edit.connecting_flow_id}' no longer exists")
        for fid in edit.rewired_flow_ids:
            flow = flows.get(fid)
            if flow is None:
                raise StaleFixError(f"flow '{fid}' no longer exists")
            endpoint = flow.target if edit.placement == "before" else flow.source
            if endpoint != edit.gateway_id:
                raise StaleFixError(f"flow '{fid}' is no longer attached to '{edit.gateway_id}'")
        for fid in edit.rewired_flow_ids:
            flow = flows[fid]
            if edit.placement == "before":
                flows[fid] = replace(flow, target=edit.node_id)
            else:
                flows[fid] = replace(flow, source=edit.node_id)
        del flows[edit.connecting_flow_id]
        del self.nodes[pid][edit.gateway_id]
        del self.node_proc[edit.gateway_id]
        self.coords.pop(edit.gateway_id, None)
        return InsertGateway(
            gateway.kind,
            edit.node_id,
            edit.placement,
            edit.rewired_flow_ids,
            edit.gateway_id,
            edit.connecting_flow_id,
        )

    def _add_end_event(self, edit: AddEndEvent) -> Edit:
        located = self.flow(edit.flow_id)
        if located is None:
            raise StaleFixError(f"flow '{edit.flow_id}' no longer exists")
        pid, flow = located
        self._require_free(edit.end_event_id)
        original_target = flow.target
        self.nodes[pid][edit.end_event_id] = FlowNode(edit.end_event_id, NodeKind.NONE_END)
        self.node_proc[edit.end_event_id] = pid
        self.flows[pid][edit.flow_id] = replace(flow, target=edit.end_event_id)
        sx, sy = self.center(flow.source)
        tx, ty = self.center(original_target)
        self.coords[edit.end_event_id] = ((sx + tx) / 2.0, (sy + ty) / 2.0)
        return RemoveEndEvent(edit.end_event_id, edit.flow_id, original_target)

    def _remove_end_event(self, edit: RemoveEndEvent) -> Edit:
        node = self._require_node(edit.end_event_id)
        if node.kind is not NodeKind.NONE_END:
            raise StaleFixError(f"'{edit.end_event_id}' is not an end event")
        self._require_node(edit.original_target)
        located = self.flow(edit.flow_id)
        if located is None:
            raise StaleFixError(f"flow '{edit.flow_id}' no longer exists")
        pid, flow = located
        if flow.target != edit.end_event_id:
            raise StaleFixError(f"flow '{edit.flow_id}' no longer targets '{edit.end_event_id}'")
        self.flows[pid][edit.flow_id] = replace(flow, target=edit.original_target)
        del self.nodes[pid][edit.end_event_id]
        del self.node_proc[edit.end_event_id]
        self.coords.pop(edit.end_event_id, None)
        return AddEndEvent(edit.flow_id, edit.end_event_id)

    def _add_sequence_flow(self, edit: AddSequenceFlow) -> Edit:
        source = self._require_node(edit.source)
        target = self._require_node(edit.target)
        if self.node_proc[source.id] != self.node_proc[target.id]:
            raise StaleFixError("sequence flows cannot cross processes")
        self._require_free(edit.flow_id)
        pid = self.node_proc[source.id]
        self.flows[pid][edit.flow_id] = SequenceFlow(edit.flow_id, edit.source, edit.target)
        return RemoveSequenceFlow(edit.flow_id, edit.source, edit.target)

    def _remove_sequence_flow(self, edit: RemoveSequenceFlow) -> Edit:
        located = self.flow(edit.flow_id)
        if located is None:
            raise StaleFixError(f"flow '{edit.flow_id}' no longer exists")
        pid, flow = located
        if (flow.source, flow.target) != (edit.source, edit.target):
            raise StaleFixError(f"flow '{edit.flow_id}' changed since the fix was suggested")
        del self.flows[pid][edit.flow_id]
        return AddSequenceFlow(edit.source, edit.target, edit.flow_id)

    def _add_message_flow(self, edit: AddMessageFlow) -> Edit:
        self._require_node(edit.source)
        self._require_node(edit.target)
        self._require_free(edit.flow_id)
        self.message_flows[edit.flow_id] = MessageFlow(edit.flow_id, edit.source, edit.target)
        return RemoveMessageFlow(edit.flow_id, edit.source, edit.target)

    def _remove_message_flow(self, edit: RemoveMessageFlow) -> Edit:
        flow = self.message_flows.get(edit.flow_id)
        if flow is None or (flow.source, flow.target) != (edit.source, edit.target):
            raise StaleFixError(f"message flow '{edit.flow_id}' no longer exists")
        del self.message_flows[edit.flow_id]
        return AddMessageFlow(edit.source, edit.target, edit.flow_id)

    def freeze(self) -> ProcessModel:
        processes = [
            Process(
                pid,
                tuple(self.nodes[pid].values()),
                tuple(self.flows[pid].values()),
                self.proc_names[pid],
            )
            for pid in self.nodes
        ]
        return build_model(processes, self.message_flows.values(), self.coords)


def apply_fix(model: ProcessModel, fix: QuickFix) -> tuple[ProcessModel, QuickFix]:
    """Apply all edits atomically; returns the new model and the inverse fix.

    Raises :class:`StaleFixError` (leaving the input untouched) when the fix
    references elements that are gone or changed.
    """
    workspace = _Workspace(model)
    inverse_edits = [workspace.apply(edit) for edit in fix.edits]
    try:
        edited = workspace.freeze()
    except ModelError as exc:
        raise StaleFixError(f"fix no longer yields a valid model: {exc}") from exc
    inverse_edits.reverse()
    inverse = QuickFix(
        _fix_id(f"undo-{fix.strategy}", fix.anchor_element, inverse_edits),
        fix.target_property,
        fix.anchor_element,
        tuple(inverse_edits),
        f"Revert: {fix.rationale}",
        f"undo-{fix.strategy}",
    )
    return edited, inverse
