"""Breadth-first state-space exploration with on-the-fly property checks.

One pass explores every reachable state and checks all enabled properties
simultaneously; exploration never stops at the first violation because the
dead-activity check needs the full space.  One predecessor transition per
state is recorded so violations can be explained by shortest (BFS-layer)
counterexample traces.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .model import ACTIVITY_KINDS, ProcessModel
from .semantics import State, Transition, initial_state, successors


class Property(Enum):
    SAFENESS = "Safeness"
    OPTION_TO_COMPLETE = "OptionToComplete"
    PROPER_COMPLETION = "ProperCompletion"
    NO_DEAD_ACTIVITIES = "NoDeadActivities"


ALL_PROPERTIES = (
    Property.SAFENESS,
    Property.OPTION_TO_COMPLETE,
    Property.PROPER_COMPLETION,
    Property.NO_DEAD_ACTIVITIES,
)


class Verdict(Enum):
    FULFILLED = "fulfilled"
    VIOLATED = "violated"
    UNKNOWN = "unknown"  # only after hitting the state limit


@dataclass(frozen=True)
class ExplorationConfig:
    max_states: int = 1_048_576
    properties: frozenset[Property] = frozenset(ALL_PROPERTIES)
    # Livelock detection (backward reachability from completed states) goes
    # beyond plain stuck-state detection and is off by default.
    check_livelock: bool = False

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be >= 1")


@dataclass(frozen=True)
class Counterexample:
    """Replayable run from the initial state to the violating state."""

    steps: tuple[Transition, ...]
    violating_state: State


@dataclass
class CheckResult:
    verdicts: dict[Property, Verdict]
    unsafe_flow_ids: frozenset[str] = frozenset()
    improper_end_event_ids: frozenset[str] = frozenset()
    dead_activity_ids: frozenset[str] = frozenset()
    counterexamples: dict[Property, Counterexample] = field(default_factory=dict)
    state_count: int = 0
    transition_count: int = 0
    elapsed_ms: float = 0.0

    def fulfilled(self, prop: Property) -> bool:
        return self.verdicts.get(prop) is Verdict.FULFILLED

    def violated(self, prop: Property) -> bool:
        return self.verdicts.get(prop) is Verdict.VIOLATED

    def all_fulfilled(self) -> bool:
        return all(v is Verdict.FULFILLED for v in self.verdicts.values())


class StateSpaceLimitExceeded(Exception):
    """The deduplication set would exceed the configured maximum.

    ``partial`` carries whatever could be concluded before the limit:
    violations already observed stay Violated, everything else is Unknown.
    """

    def __init__(self, limit: int, partial: CheckResult):
        self.limit = limit
        self.partial = partial
        super().__init__(f"state space exceeds the configured limit of {limit} states")


class ExplorationRecord:
    """BFS bookkeeping kept for counterexample reconstruction."""

    def __init__(self, initial: State):
        self.initial = initial
        # insertion order == discovery order
        self.predecessors: dict[State, tuple[str, State] | None] = {initial: None}
        self.edges: dict[State, tuple[State, ...]] | None = None

    def states(self):
        return self.predecessors.keys()

    def trace_to(self, state: State) -> Counterexample:
        if state not in self.predecessors:
            raise ValueError("state was not reached during this exploration")
        steps: list[Transition] = []
        cur = state
        while True:
            pred = self.predecessors[cur]
            if pred is None:
                break
            elem, prev = pred
            steps.append(Transition(elem, cur))
            cur = prev
        steps.reverse()
        return Counterexample(tuple(steps), state)


def unsafe_flows(state: State) -> set[str]:
    """Sequence flows on which some single process instance holds 2+ tokens."""
    bad: set[str] = set()
    for snap in state.snapshots:
        for flow_id, count in snap.token_items():
            if count >= 2:
                bad.add(flow_id)
    return bad


def reconstruct_trace(record: ExplorationRecord, violating_state: State) -> Counterexample:
    return record.trace_to(violating_state)


def check(model: ProcessModel, config: ExplorationConfig | None = None) -> CheckResult:
    return explore(model, config)[0]


def explore(
    model: ProcessModel, config: ExplorationConfig | None = None
) -> tuple[CheckResult, ExplorationRecord]:
    cfg = config or ExplorationConfig()
    props = cfg.properties
    want_safe = Property.SAFENESS in props
    want_stuck = Property.OPTION_TO_COMPLETE in props
    want_proper = Property.PROPER_COMPLETION in props

    started = time.perf_counter()
    init = initial_state(model)
    record = ExplorationRecord(init)
    predecessors = record.predecessors
    queue = deque([init])

    unsafe_ids: set[str] = set()
    improper_ids: set[str] = set()
    executed: set[str] = set()
    first_unsafe: State | None = None
    first_improper: State | None = None
    first_stuck: State | None = None
    transition_count = 0
    edges: dict[State, tuple[State, ...]] | None = {} if cfg.check_livelock else None

    def scan(state: State):
        nonlocal first_unsafe, first_improper
        if want_safe:
            for snap in state.snapshots:
                for flow_id, count in snap._tokens:
                    if count >= 2:
                        unsafe_ids.add(flow_id)
                        if first_unsafe is None:
                            first_unsafe = state
        if want_proper:
            for snap in state.snapshots:
                for end_id, count in snap._ends:
                    if count >= 2:
                        improper_ids.add(end_id)
                        if first_improper is None:
                            first_improper = state

    scan(init)
    max_states = cfg.max_states

    def partial_result() -> CheckResult:
        res = _build_result(
            model,
            props,
            unsafe_ids,
            improper_ids,
            executed,
            first_unsafe,
            first_improper,
            first_stuck,
            record,
            len(predecessors),
            transition_count,
            (time.perf_counter() - started) * 1000.0,
        )
        for prop in props:
            if res.verdicts.get(prop) is not Verdict.VIOLATED:
                res.verdicts[prop] = Verdict.UNKNOWN
        return res

    while queue:
        state = queue.popleft()
        transitions = successors(model, state)
        transition_count += len(transitions)
        if edges is not None:
            edges[state] = tuple(t.successor for t in transitions)
        if not transitions:
            if first_stuck is None and state.has_live_tokens:
                first_stuck = state
            continue
        for elem, succ in transitions:
            executed.add(elem)
            if succ not in predecessors:
                if len(predecessors) >= max_states:
                    raise StateSpaceLimitExceeded(max_states, partial_result())
                predecessors[succ] = (elem, state)
                scan(succ)
                queue.append(succ)

    record.edges = edges
    livelocked: State | None = None
    if cfg.check_livelock and want_stuck and first_stuck is None:
        livelocked = _find_livelock(record)

    result = _build_result(
        model,
        props,
        unsafe_ids,
        improper_ids,
        executed,
        first_unsafe,
        first_improper,
        first_stuck if first_stuck is not None else livelocked,
        record,
        len(predecessors),
        transition_count,
        (time.perf_counter() - started) * 1000.0,
    )
    return result, record


def _build_result(
    model,
    props,
    unsafe_ids,
    improper_ids,
    executed,
    first_unsafe,
    first_improper,
    first_stuck,
    record,
    state_count,
    transition_count,
    elapsed_ms,
) -> CheckResult:
    verdicts: dict[Property, Verdict] = {}
    counterexamples: dict[Property, Counterexample] = {}
    dead: frozenset[str] = frozenset()

    if Property.SAFENESS in props:
        verdicts[Property.SAFENESS] = Verdict.VIOLATED if unsafe_ids else Verdict.FULFILLED
        if first_unsafe is not None:
            counterexamples[Property.SAFENESS] = record.trace_to(first_unsafe)
    if Property.OPTION_TO_COMPLETE in props:
        verdicts[Property.OPTION_TO_COMPLETE] = (
            Verdict.VIOLATED if first_stuck is not None else Verdict.FULFILLED
        )
        if first_stuck is not None:
            counterexamples[Property.OPTION_TO_COMPLETE] = record.trace_to(first_stuck)
    if Property.PROPER_COMPLETION in props:
        verdicts[Property.PROPER_COMPLETION] = (
            Verdict.VIOLATED if improper_ids else Verdict.FULFILLED
        )
        if first_improper is not None:
            counterexamples[Property.PROPER_COMPLETION] = record.trace_to(first_improper)
    if Property.NO_DEAD_ACTIVITIES in props:
        dead = frozenset(a for a in model.activity_ids() if a not in executed)
        verdicts[Property.NO_DEAD_ACTIVITIES] = (
            Verdict.VIOLATED if dead else Verdict.FULFILLED
        )

    return CheckResult(
        verdicts=verdicts,
        unsafe_flow_ids=frozenset(unsafe_ids),
        improper_end_event_ids=frozenset(improper_ids),
        dead_activity_ids=dead,
        counterexamples=counterexamples,
        state_count=state_count,
        transition_count=transition_count,
        elapsed_ms=elapsed_ms,
    )


def _find_livelock(record: ExplorationRecord) -> State | None:
    """First discovered state from which no completed state is reachable."""
    edges = record.edges or {}
    reverse: dict[State, list[State]] = {}
    for src, targets in edges.items():
        for tgt in targets:
            reverse.setdefault(tgt, []).append(src)
    frontier = [s for s in record.states() if not s.has_live_tokens]
    coreachable = set(frontier)
    while frontier:
        nxt = frontier.pop()
        for prev in reverse.get(nxt, ()):
            if prev not in coreachable:
                coreachable.add(prev)
                frontier.append(prev)
    for state in record.states():
        if state not in coreachable:
            return state
    return None
