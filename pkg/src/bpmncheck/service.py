"""Stateless HTTP service: POST /check, POST /apply-fix, GET /health.

Every request parses and checks from scratch; nothing is stored between
requests, so identical inputs produce identical reports (modulo timing).
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bpmn_xml import parse_bpmn, serialize_bpmn
from .checker import ExplorationConfig, Property, StateSpaceLimitExceeded, explore
from .cli import _parse_properties
from .quickfix import QuickFix, StaleFixError, apply_fix, edit_from_wire, suggest_fixes
from .report import check_report, fix_to_wire, issues_report
from .semantics import initial_state

app = FastAPI(title="bpmncheck", version="1")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/check")
async def check_endpoint(
    request: Request,
    properties: str | None = Query(default=None),
    quickFixes: bool = Query(default=False),
    maxStates: int = Query(default=1_048_576, ge=1),
):
    body = await request.body()
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError:
        return JSONResponse(status_code=400, content={"error": "body must be UTF-8 BPMN XML"})
    parsed = parse_bpmn(text)
    if isinstance(parsed, list):
        return JSONResponse(status_code=400, content=issues_report(parsed))
    try:
        config = ExplorationConfig(max_states=maxStates, properties=_parse_properties(properties))
    except Exception as exc:
        return JSONResponse(status_code=400, content={"error": str(exc)})
    try:
        result, record = explore(parsed, config)
    except StateSpaceLimitExceeded as exc:
        return JSONResponse(
            status_code=422,
            content={
                "error": str(exc),
                "partial": check_report(exc.partial, initial_state(parsed)),
            },
        )
    fixes = suggest_fixes(parsed, result) if quickFixes else []
    return JSONResponse(content=check_report(result, record.initial, fixes))


class ApplyFixRequest(BaseModel):
    bpmnXml: str
    fixId: str | None = None
    edits: list[dict] | None = None
    maxStates: int = 1_048_576


@app.post("/apply-fix")
def apply_fix_endpoint(payload: ApplyFixRequest):
    parsed = parse_bpmn(payload.bpmnXml)
    if isinstance(parsed, list):
        return JSONResponse(status_code=400, content=issues_report(parsed))

    if payload.fixId is not None:
        # Re-derive the fixes for this document; a fix id that no longer comes
        # up means the model changed since it was suggested.
        try:
            result, _record = explore(parsed, ExplorationConfig(max_states=payload.maxStates))
        except StateSpaceLimitExceeded as exc:
            return JSONResponse(status_code=422, content={"error": str(exc)})
        fix = next((f for f in suggest_fixes(parsed, result) if f.id == payload.fixId), None)
        if fix is None:
            return JSONResponse(
                status_code=409,
                content={"error": f"fix '{payload.fixId}' is stale or unknown for this model"},
            )
    elif payload.edits:
        try:
            edits = tuple(edit_from_wire(e) for e in payload.edits)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        fix = QuickFix("fix-adhoc", Property.SAFENESS, "", edits, "client-supplied edits", "adhoc")
    else:
        return JSONResponse(status_code=400, content={"error": "provide fixId or edits"})

    try:
        edited, inverse = apply_fix(parsed, fix)
    except StaleFixError as exc:
        return JSONResponse(status_code=409, content={"error": str(exc)})
    return JSONResponse(
        content={
            "bpmnXml": serialize_bpmn(edited),
            "inverseEdits": fix_to_wire(inverse)["edits"],
            "appliedFixId": fix.id,
        }
    )
