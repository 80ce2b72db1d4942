"""Record real wire payloads from the checking service for the frontend tests.

Run from the repository root after installing the Python package:

    python3 frontend/scripts/generate_fixtures.py

Writes BPMN documents, check reports, and an apply-fix response into
frontend/test/fixtures/.  elapsedMs is zeroed so regeneration diffs stay
clean.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tests"))

import corpus  # noqa: E402
from bpmncheck import (  # noqa: E402
    apply_fix,
    explore,
    generate_parallel,
    serialize_bpmn,
    suggest_fixes,
)
from bpmncheck.report import check_report, fix_to_wire  # noqa: E402

FIXTURES = ROOT / "frontend" / "test" / "fixtures"


def report_for(model, with_fixes=True):
    result, record = explore(model)
    fixes = suggest_fixes(model, result) if with_fixes else []
    report = check_report(result, record.initial, fixes)
    report["stats"]["elapsedMs"] = 0
    return report, fixes


def element_ids(model):
    ids = []
    for p in model.processes:
        ids.extend(n.id for n in p.flow_nodes)
        ids.extend(f.id for f in p.sequence_flows)
    ids.extend(m.id for m in model.message_flows)
    return sorted(ids)


def dump(name, payload):
    path = FIXTURES / name
    if isinstance(payload, str):
        path.write_text(payload, encoding="utf-8")
    else:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(path)


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)

    mismatch = corpus.mismatched_gateways()
    mismatch_xml = serialize_bpmn(mismatch)
    mismatch_report, mismatch_fixes = report_for(mismatch)
    dump("mismatch.bpmn", mismatch_xml)
    dump("mismatch.report.json", mismatch_report)
    dump("mismatch.elements.json", element_ids(mismatch))

    # fix (a): the first suggested fix, as a user would click it
    first = mismatch_fixes[0]
    edited, inverse = apply_fix(mismatch, first)
    apply_payload = {
        "bpmnXml": serialize_bpmn(edited),
        "inverseEdits": fix_to_wire(inverse)["edits"],
        "appliedFixId": first.id,
    }
    dump("mismatch.applyfix.json", apply_payload)
    fixed_report, _ = report_for(edited)
    dump("mismatch.fixed.bpmn", apply_payload["bpmnXml"])
    dump("mismatch.fixed.report.json", fixed_report)

    sound = generate_parallel(2, 1)
    sound_report, _ = report_for(sound)
    dump("sound.report.json", sound_report)

    dead = corpus.disconnected_task()
    dead_report, _ = report_for(dead)
    dump("dead.report.json", dead_report)
    dump("dead.elements.json", element_ids(dead))


if __name__ == "__main__":
    main()
