/**
 * End-to-end UI loop over recorded service payloads: load -> overlays ->
 * counterexample animation -> quick fix -> automatic re-check -> undo.
 */

import { describe, expect, it } from "vitest";

import { CheckClient } from "../src/client.js";
import { Studio } from "../src/studio.js";
import { ApplyFixResponse, CheckReport } from "../src/types.js";
import { FakeService, ManualScheduler, fixture, fixtureJson } from "./helpers.js";

const MISMATCH_XML = fixture("mismatch.bpmn");
const MISMATCH_REPORT = fixtureJson<CheckReport>("mismatch.report.json");
const FIXED_XML = fixture("mismatch.fixed.bpmn");
const FIXED_REPORT = fixtureJson<CheckReport>("mismatch.fixed.report.json");
const APPLY = fixtureJson<ApplyFixResponse>("mismatch.applyfix.json");
const DIAGRAM_IDS = new Set(fixtureJson<string[]>("mismatch.elements.json"));

describe("studio UI loop on the mismatched-gateway model", () => {
  it("overlays, paused animation, fix (a) with re-check, and byte-exact undo", async () => {
    const service = new FakeService()
      .route(MISMATCH_XML, MISMATCH_REPORT)
      .route(FIXED_XML, FIXED_REPORT)
      .routeApply(MISMATCH_XML, APPLY.appliedFixId, APPLY);
    const studio = new Studio(new CheckClient("http://svc", service.fetch), {
      diagramIds: () => DIAGRAM_IDS,
    });

    // loading the model shows red overlays on the unsafe flow and the
    // improper end event, plus the summary panel
    await studio.loadDocument(MISMATCH_XML);
    const overlays = studio.overlays!;
    expect(overlays.violations.get("f6")).toContain("Safeness");
    expect(overlays.violations.get("E")).toContain("ProperCompletion");
    expect(overlays.summary.map((row) => row.name)).toEqual([
      "Safeness",
      "OptionToComplete",
      "ProperCompletion",
      "NoDeadActivities",
    ]);

    // play the Safeness counterexample and pause just before the unsafe
    // state: one token already sits on the flagged flow, one waits at e1
    const scheduler = new ManualScheduler();
    const session = studio.animateCounterexample("Safeness", { scheduler })!;
    session.play();
    while (session.cursor < session.steps.length - 1) scheduler.fire();
    session.pause();
    expect(session.cursor).toBe(4);
    expect(session.tokens().get("f6")).toBe(1);
    expect(session.tokens().get("f5")).toBe(1);
    expect(session.log()).toEqual(["p1", "A", "B", "e1"]);

    // clicking fix (a) applies it and the automatic re-check clears the
    // Safeness overlay
    const fixA = studio.report!.quickFixes[0]!;
    expect(await studio.applyFix(fixA.id)).toBe(true);
    const fixedOverlays = studio.overlays!;
    const safenessBadges = [...fixedOverlays.violations.values()].flat();
    expect(safenessBadges).not.toContain("Safeness");
    expect(fixedOverlays.summary.find((row) => row.name === "Safeness")!.fulfilled).toBe(true);

    // one undo restores the original document byte-exactly
    expect(await studio.undo()).toBe(true);
    expect(studio.xml).toBe(MISMATCH_XML);
  });
});
