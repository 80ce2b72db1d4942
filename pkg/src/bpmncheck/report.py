"""Wire-format projection of check results and fixes (schema version 1).

Counterexamples travel as per-step deltas (token and message count changes)
rather than full states, so payloads stay linear in trace length; clients
rebuild states incrementally starting from ``initialTokens``.
"""

from __future__ import annotations

import json

from .checker import ALL_PROPERTIES, CheckResult, Counterexample, Property, Verdict
from .model import ModelIssue
from .quickfix import QuickFix, edit_to_wire
from .semantics import State

SCHEMA_VERSION = 1

_PROBLEM_SOURCE = {
    Property.SAFENESS: "unsafe_flow_ids",
    Property.PROPER_COMPLETION: "improper_end_event_ids",
    Property.NO_DEAD_ACTIVITIES: "dead_activity_ids",
}


def _aggregate_tokens(state: State) -> dict[str, int]:
    totals: dict[str, int] = {}
    for snap in state.snapshots:
        for flow_id, count in snap.token_items():
            totals[flow_id] = totals.get(flow_id, 0) + count
    return totals


def _delta(before: dict[str, int], after: dict[str, int]) -> dict[str, int]:
    changes: dict[str, int] = {}
    for key in before.keys() | after.keys():
        diff = after.get(key, 0) - before.get(key, 0)
        if diff:
            changes[key] = diff
    return changes


def counterexample_to_wire(initial: State, ce: Counterexample) -> list[dict]:
    steps = []
    tokens = _aggregate_tokens(initial)
    messages = dict(initial.pending_items())
    for elem, successor in ce.steps:
        next_tokens = _aggregate_tokens(successor)
        next_messages = dict(successor.pending_items())
        steps.append(
            {
                "executedElement": elem,
                "stateDelta": {
                    "tokens": _delta(tokens, next_tokens),
                    "messages": _delta(messages, next_messages),
                },
            }
        )
        tokens, messages = next_tokens, next_messages
    return steps


def fix_to_wire(fix: QuickFix) -> dict:
    return {
        "id": fix.id,
        "property": fix.target_property.value,
        "anchorElement": fix.anchor_element,
        "edits": [edit_to_wire(e) for e in fix.edits],
        "rationale": fix.rationale,
    }


def check_report(
    result: CheckResult,
    initial: State,
    fixes: list[QuickFix] | None = None,
) -> dict:
    properties = []
    for prop in ALL_PROPERTIES:
        verdict = result.verdicts.get(prop)
        if verdict is None:
            continue
        ids_field = _PROBLEM_SOURCE.get(prop)
        problematic = sorted(getattr(result, ids_field)) if ids_field else []
        properties.append(
            {
                "name": prop.value,
                "fulfilled": None if verdict is Verdict.UNKNOWN else verdict is Verdict.FULFILLED,
                "problematicElements": problematic,
            }
        )
    counterexamples = {
        prop.value: counterexample_to_wire(initial, ce)
        for prop, ce in sorted(result.counterexamples.items(), key=lambda kv: kv[0].value)
    }
    return {
        "schemaVersion": SCHEMA_VERSION,
        "properties": properties,
        "initialTokens": dict(sorted(_aggregate_tokens(initial).items())),
        "counterexamples": counterexamples,
        "quickFixes": [fix_to_wire(f) for f in fixes or []],
        "stats": {
            "states": result.state_count,
            "transitions": result.transition_count,
            "elapsedMs": result.elapsed_ms,
        },
    }


def issues_report(issues: list[ModelIssue]) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "issues": [
            {"elementId": i.element_id, "category": i.category.value, "detail": i.detail}
            for i in issues
        ],
    }


def to_json(report: dict) -> str:
    """Canonical rendering: sorted keys, fixed separators, byte-stable."""
    return json.dumps(report, sort_keys=True, separators=(",", ":"))
