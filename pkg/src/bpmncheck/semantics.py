"""Token-game execution semantics: states, snapshots, and successors.

Each supported element executes as one atomic step.  Tasks in particular are
not split into start/end sub-states; a firing consumes its input tokens and
produces its output tokens in a single transition, which keeps state spaces
small.

States are canonical and hash-cached: two states with equal snapshot
multisets and pending-message maps compare equal no matter how they were
constructed.  That property is what makes breadth-first deduplication work.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple
from weakref import WeakKeyDictionary

from .model import FlowNode, NodeKind, ProcessModel

# Kinds that emit a token on every outgoing flow when they fire (a node of
# this kind with several outgoing flows acts as an implicit parallel split).
PRODUCE_ALL_KINDS = frozenset(
    {
        NodeKind.TASK,
        NodeKind.SEND_TASK,
        NodeKind.RECEIVE_TASK,
        NodeKind.PARALLEL_GATEWAY,
        NodeKind.MESSAGE_THROW,
        NodeKind.MESSAGE_CATCH,
    }
)

_END_CAP = 2  # executing an end event more times adds no information


def _normalize_counts(counts, cap: int | None = None) -> tuple:
    items = counts.items() if isinstance(counts, Mapping) else counts
    out = []
    for key, count in items:
        if count < 0:
            raise ValueError(f"negative count for '{key}'")
        if count:
            out.append((key, count if cap is None else min(count, cap)))
    out.sort()
    return tuple(out)


class Snapshot:
    """One process instance: its tokens and executed end events.

    ``tokens`` maps sequence-flow IDs to positive token counts; zero-count
    entries are dropped, and a snapshot with no tokens is *completed*.  End
    event execution counts are part of the snapshot's identity but cap at 2,
    which keeps state spaces finite in the presence of loops without changing
    any verdict.
    """

    __slots__ = ("process_id", "_tokens", "_ends", "_hash")

    def __init__(self, process_id: str, tokens=(), end_executions=()):
        self.process_id = process_id
        self._tokens = _normalize_counts(tokens)
        self._ends = _normalize_counts(end_executions, cap=_END_CAP)
        self._hash = hash((process_id, self._tokens, self._ends))

    @classmethod
    def _raw(cls, process_id: str, tokens: tuple, ends: tuple) -> "Snapshot":
        snap = object.__new__(cls)
        snap.process_id = process_id
        snap._tokens = tokens
        snap._ends = ends
        snap._hash = hash((process_id, tokens, ends))
        return snap

    @property
    def tokens(self) -> dict[str, int]:
        return dict(self._tokens)

    @property
    def end_executions(self) -> dict[str, int]:
        return dict(self._ends)

    def token_items(self) -> tuple[tuple[str, int], ...]:
        return self._tokens

    def end_items(self) -> tuple[tuple[str, int], ...]:
        return self._ends

    @property
    def completed(self) -> bool:
        return not self._tokens

    def total_tokens(self) -> int:
        return sum(c for _, c in self._tokens)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.process_id == other.process_id
            and self._tokens == other._tokens
            and self._ends == other._ends
        )

    def __repr__(self):
        toks = ", ".join(f"{f}:{c}" for f, c in self._tokens)
        ends = ", ".join(f"{e}:{c}" for e, c in self._ends)
        return f"Snapshot({self.process_id}, {{{toks}}}, ends={{{ends}}})"


def _snapshot_sort_key(snap: Snapshot):
    return (snap.process_id, snap._tokens, snap._ends)


class State:
    """A multiset of snapshots plus the pending inter-process messages."""

    __slots__ = ("snapshots", "_pending", "_hash")

    def __init__(self, snapshots: Iterable[Snapshot] = (), pending_messages=()):
        snaps = tuple(sorted(snapshots, key=_snapshot_sort_key))
        pending = _normalize_counts(pending_messages)
        self.snapshots = snaps
        self._pending = pending
        self._hash = hash((tuple(s._hash for s in snaps), pending))

    @classmethod
    def _raw(cls, snapshots: tuple, pending: tuple) -> "State":
        state = object.__new__(cls)
        state.snapshots = snapshots
        state._pending = pending
        state._hash = hash((tuple(s._hash for s in snapshots), pending))
        return state

    @property
    def pending_messages(self) -> dict[str, int]:
        return dict(self._pending)

    def pending_items(self) -> tuple[tuple[str, int], ...]:
        return self._pending

    @property
    def has_live_tokens(self) -> bool:
        return any(s._tokens for s in self.snapshots)

    @property
    def completed(self) -> bool:
        """Terminal completion: every snapshot done, no message in flight."""
        return not self._pending and not self.has_live_tokens

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, State):
            return NotImplemented
        return (
            self._hash == other._hash
            and self._pending == other._pending
            and self.snapshots == other.snapshots
        )

    def __repr__(self):
        pend = ", ".join(f"{m}:{c}" for m, c in self._pending)
        return f"State({list(self.snapshots)!r}, pending={{{pend}}})"


class Transition(NamedTuple):
    executed_element: str
    successor: State


class _Plan:
    """Per-model lookup tables for successor computation."""

    __slots__ = (
        "flow_target",
        "in_message_flows",
        "out_message_flows",
        "link_outputs",
        "gateway_arms",
        "instantiators",
        "none_start_flows",
    )

    def __init__(self, model: ProcessModel):
        self.flow_target: dict[str, FlowNode] = {}
        for p in model.processes:
            local = p.node_by_id
            for f in p.sequence_flows:
                target = local.get(f.target)
                if target is not None:
                    self.flow_target[f.id] = target

        self.in_message_flows: dict[str, tuple[str, ...]] = {}
        self.out_message_flows: dict[str, tuple[str, ...]] = {}
        for m in model.message_flows:
            self.out_message_flows.setdefault(m.source, ())
            self.out_message_flows[m.source] += (m.id,)
            self.in_message_flows.setdefault(m.target, ())
            self.in_message_flows[m.target] += (m.id,)

        self.link_outputs: dict[str, tuple[str, ...]] = {}
        self.gateway_arms: dict[str, tuple[FlowNode, ...]] = {}
        self.instantiators: list[tuple[str, str, tuple[str, ...], tuple[str, ...]]] = []
        self.none_start_flows: dict[str, tuple[str, ...]] = {}
        for p in model.processes:
            catches: dict[str, FlowNode] = {
                n.link_name: n for n in p.flow_nodes if n.kind is NodeKind.LINK_CATCH
            }
            start_flows: tuple[str, ...] = ()
            for n in p.flow_nodes:
                if n.kind is NodeKind.LINK_THROW:
                    catch = catches.get(n.link_name)
                    self.link_outputs[n.id] = catch.outgoing if catch else ()
                elif n.kind is NodeKind.EVENT_BASED_GATEWAY:
                    self.gateway_arms[n.id] = tuple(
                        self.flow_target[fid] for fid in n.outgoing if fid in self.flow_target
                    )
                elif n.kind is NodeKind.NONE_START:
                    start_flows += n.outgoing
                elif n.kind is NodeKind.MESSAGE_START or (
                    n.kind is NodeKind.RECEIVE_TASK and n.instantiate
                ):
                    in_mf = self.in_message_flows.get(n.id, ())
                    if in_mf:
                        self.instantiators.append((p.id, n.id, in_mf, n.outgoing))
            if start_flows:
                self.none_start_flows[p.id] = start_flows


_plans: "WeakKeyDictionary[ProcessModel, _Plan]" = WeakKeyDictionary()


def _plan_for(model: ProcessModel) -> _Plan:
    plan = _plans.get(model)
    if plan is None:
        plan = _Plan(model)
        _plans[model] = plan
    return plan


def initial_state(model: ProcessModel) -> State:
    """One snapshot per process instantiated by a plain start event.

    The start event itself is not a step: its outgoing flows are marked
    directly.  Processes instantiated by messages contribute nothing until a
    message arrives.
    """
    plan = _plan_for(model)
    snaps = [
        Snapshot(p.id, {f: 1 for f in plan.none_start_flows[p.id]})
        for p in model.processes
        if p.id in plan.none_start_flows
    ]
    return State(snaps)


def _apply_delta(pairs: tuple, consume, produce) -> tuple:
    counts = dict(pairs)
    for fid in consume:
        c = counts[fid] - 1
        if c:
            counts[fid] = c
        else:
            del counts[fid]
    for fid in produce:
        counts[fid] = counts.get(fid, 0) + 1
    return tuple(sorted(counts.items()))


def _bump_end(ends: tuple, end_id: str) -> tuple:
    counts = dict(ends)
    counts[end_id] = min(counts.get(end_id, 0) + 1, _END_CAP)
    return tuple(sorted(counts.items()))


def _pending_add(pending: tuple, message_flows) -> tuple:
    counts = dict(pending)
    for mf in message_flows:
        counts[mf] = counts.get(mf, 0) + 1
    return tuple(sorted(counts.items()))


def _pending_take(pending: tuple, mf: str) -> tuple:
    counts = dict(pending)
    c = counts[mf] - 1
    if c:
        counts[mf] = c
    else:
        del counts[mf]
    return tuple(sorted(counts.items()))


def successors(model: ProcessModel, state: State) -> list[Transition]:
    """All atomic steps enabled in ``state``, deduplicated and deterministic.

    An empty list means no element can fire; if tokens remain the state is
    stuck.
    """
    plan = _plan_for(model)
    flow_target = plan.flow_target
    snaps = state.snapshots
    pending = state._pending
    pending_map = dict(pending)

    results: list[Transition] = []
    seen: set[tuple[str, State]] = set()

    def emit(elem: str, succ: State):
        key = (elem, succ)
        if key not in seen:
            seen.add(key)
            results.append(Transition(elem, succ))

    def replace_at(idx: int, snap: Snapshot, new_pending: tuple | None = None) -> State:
        if len(snaps) == 1:
            new_snaps = (snap,)
        else:
            lst = list(snaps)
            lst[idx] = snap
            lst.sort(key=_snapshot_sort_key)
            new_snaps = tuple(lst)
        return State._raw(new_snaps, pending if new_pending is None else new_pending)

    for idx, snap in enumerate(snaps):
        tokens = snap._tokens
        if not tokens:
            continue
        token_map = dict(tokens)
        pid = snap.process_id
        ends = snap._ends

        # Only nodes sitting downstream of a marked flow can fire.
        marked: dict[str, list[str]] = {}
        order: list[FlowNode] = []
        for fid, _count in tokens:
            node = flow_target.get(fid)
            if node is None:
                continue
            flows = marked.get(node.id)
            if flows is None:
                marked[node.id] = [fid]
                order.append(node)
            else:
                flows.append(fid)

        for node in order:
            nid = node.id
            kind = node.kind
            inputs = marked[nid]

            if kind is NodeKind.TASK:
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), node.outgoing), ends)))
            elif kind is NodeKind.EXCLUSIVE_GATEWAY:
                for fid in inputs:
                    for out in node.outgoing:
                        emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), (out,)), ends)))
            elif kind is NodeKind.PARALLEL_GATEWAY:
                if node.incoming and all(token_map.get(f, 0) > 0 for f in node.incoming):
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, node.incoming, node.outgoing), ends)))
            elif kind is NodeKind.NONE_END:
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), ()), _bump_end(ends, nid))))
            elif kind is NodeKind.MESSAGE_END:
                sent = _pending_add(pending, plan.out_message_flows.get(nid, ()))
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), ()), _bump_end(ends, nid)), sent))
            elif kind is NodeKind.TERMINATE_END:
                # Clears every remaining token of this instance.
                emit(nid, replace_at(idx, Snapshot._raw(pid, (), ends)))
            elif kind is NodeKind.SEND_TASK:
                sent = _pending_add(pending, plan.out_message_flows.get(nid, ()))
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), node.outgoing), ends), sent))
            elif kind is NodeKind.RECEIVE_TASK or kind is NodeKind.MESSAGE_CATCH:
                for mf in plan.in_message_flows.get(nid, ()):
                    if pending_map.get(mf, 0) > 0:
                        taken = _pending_take(pending, mf)
                        for fid in inputs:
                            emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), node.outgoing), ends), taken))
            elif kind is NodeKind.MESSAGE_THROW:
                sent = _pending_add(pending, plan.out_message_flows.get(nid, ()))
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), node.outgoing), ends), sent))
            elif kind is NodeKind.EVENT_BASED_GATEWAY:
                # The gateway never fires itself; whichever attached catching
                # element receives a message first consumes the waiting token.
                for arm in plan.gateway_arms.get(nid, ()):
                    for mf in plan.in_message_flows.get(arm.id, ()):
                        if pending_map.get(mf, 0) > 0:
                            taken = _pending_take(pending, mf)
                            for fid in inputs:
                                emit(arm.id, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), arm.outgoing), ends), taken))
            elif kind is NodeKind.LINK_THROW:
                produced = plan.link_outputs.get(nid, ())
                for fid in inputs:
                    emit(nid, replace_at(idx, Snapshot._raw(pid, _apply_delta(tokens, (fid,), produced), ends)))
            # LINK_CATCH and start events never consume sequence-flow tokens.

    if pending_map:
        for pid, nid, in_mfs, outgoing in plan.instantiators:
            for mf in in_mfs:
                if pending_map.get(mf, 0) > 0:
                    new_snap = Snapshot._raw(pid, tuple(sorted((f, 1) for f in outgoing)), ())
                    new_snaps = tuple(sorted(snaps + (new_snap,), key=_snapshot_sort_key))
                    emit(nid, State._raw(new_snaps, _pending_take(pending, mf)))

    return results
