"""Soundness and safeness checking for BPMN process models."""

from .bench import BenchRecord, run_benchmark
from .bpmn_xml import parse_bpmn, serialize_bpmn
from .checker import (
    ALL_PROPERTIES,
    CheckResult,
    Counterexample,
    ExplorationConfig,
    ExplorationRecord,
    Property,
    StateSpaceLimitExceeded,
    Verdict,
    check,
    explore,
    reconstruct_trace,
    unsafe_flows,
)
from .generators import generate_blocks, generate_parallel
from .model import (
    FlowNode,
    IssueCategory,
    MessageFlow,
    ModelError,
    ModelIssue,
    NodeKind,
    Process,
    ProcessModel,
    SequenceFlow,
    build_model,
)
from .quickfix import (
    AddEndEvent,
    AddMessageFlow,
    AddSequenceFlow,
    ChangeGatewayKind,
    Edit,
    InsertGateway,
    QuickFix,
    RemoveEndEvent,
    RemoveInsertedGateway,
    RemoveMessageFlow,
    RemoveSequenceFlow,
    StaleFixError,
    apply_fix,
    edit_from_wire,
    edit_to_wire,
    suggest_fixes,
)
from .report import check_report, to_json
from .semantics import Snapshot, State, Transition, initial_state, successors

__all__ = [
    "ALL_PROPERTIES",
    "AddEndEvent",
    "AddMessageFlow",
    "AddSequenceFlow",
    "BenchRecord",
    "ChangeGatewayKind",
    "CheckResult",
    "Counterexample",
    "Edit",
    "ExplorationConfig",
    "ExplorationRecord",
    "FlowNode",
    "InsertGateway",
    "IssueCategory",
    "MessageFlow",
    "ModelError",
    "ModelIssue",
    "NodeKind",
    "Process",
    "ProcessModel",
    "Property",
    "QuickFix",
    "RemoveEndEvent",
    "RemoveInsertedGateway",
    "RemoveMessageFlow",
    "RemoveSequenceFlow",
    "SequenceFlow",
    "Snapshot",
    "StaleFixError",
    "State",
    "StateSpaceLimitExceeded",
    "Transition",
    "Verdict",
    "apply_fix",
    "build_model",
    "check",
    "check_report",
    "edit_from_wire",
    "edit_to_wire",
    "explore",
    "generate_blocks",
    "generate_parallel",
    "initial_state",
    "parse_bpmn",
    "reconstruct_trace",
    "run_benchmark",
    "serialize_bpmn",
    "successors",
    "suggest_fixes",
    "to_json",
    "unsafe_flows",
]
