import { describe, expect, it } from "vitest";

import { renderReport } from "../src/overlays.js";
import { CheckReport } from "../src/types.js";
import { fixtureJson } from "./helpers.js";

const violating = () => fixtureJson<CheckReport>("mismatch.report.json");

describe("renderReport", () => {
  it("marks unsafe flows and improper end events red", () => {
    const overlays = renderReport(violating());
    expect(overlays.violations.get("f6")).toEqual(["Safeness"]);
    expect(overlays.violations.get("f7")).toEqual(["Safeness"]);
    expect(overlays.violations.get("E")).toEqual(["ProperCompletion"]);
  });

  it("keeps option-to-complete out of element overlays", () => {
    const report = violating();
    const otc = report.properties.find((p) => p.name === "OptionToComplete")!;
    otc.fulfilled = false;
    otc.problematicElements = ["p1"]; // even if a server listed elements
    const overlays = renderReport(report);
    expect(overlays.violations.has("p1")).toBe(false);
    expect(overlays.summary.find((s) => s.name === "OptionToComplete")!.fulfilled).toBe(false);
  });

  it("shows dead activities red", () => {
    const overlays = renderReport(fixtureJson<CheckReport>("dead.report.json"));
    expect(overlays.violations.get("D")).toEqual(["NoDeadActivities"]);
  });

  it("summarizes every checked property", () => {
    const overlays = renderReport(violating());
    expect(overlays.summary.map((s) => s.name)).toEqual([
      "Safeness",
      "OptionToComplete",
      "ProperCompletion",
      "NoDeadActivities",
    ]);
    expect(overlays.summary.map((s) => s.fulfilled)).toEqual([false, true, false, true]);
  });

  it("renders a fulfilled report with no overlays", () => {
    const overlays = renderReport(fixtureJson<CheckReport>("sound.report.json"));
    expect(overlays.violations.size).toBe(0);
    expect(overlays.fixes.size).toBe(0);
    expect(overlays.summary.every((s) => s.fulfilled)).toBe(true);
  });

  it("groups several fixes on one element into one overlay", () => {
    const report = violating();
    const [first, second] = report.quickFixes;
    second!.anchorElement = first!.anchorElement;
    const overlays = renderReport(report);
    expect(overlays.fixes.get(first!.anchorElement)).toEqual([first!.id, second!.id]);
  });

  it("drops overlays for elements missing from the diagram", () => {
    const overlays = renderReport(violating(), new Set(["f6", "e1"]));
    expect(overlays.violations.has("f6")).toBe(true);
    expect(overlays.violations.has("f7")).toBe(false);
    expect(overlays.violations.has("E")).toBe(false);
    expect([...overlays.fixes.keys()]).toEqual(["e1"]);
  });
});
