import { CheckReport, OPTION_TO_COMPLETE } from "./types.js";

/** What the canvas layer draws on top of the diagram. */
export interface OverlaySet {
  /** element id -> property names shown as red violation badges */
  violations: Map<string, string[]>;
  /** element id -> quick-fix ids shown as one green light-bulb overlay */
  fixes: Map<string, string[]>;
  /** top-right summary panel, one row per checked property */
  summary: { name: string; fulfilled: boolean | null }[];
}

/**
 * Pure projection of the latest report onto overlay positions.
 *
 * Unsafe flows, end events consuming several tokens, and dead activities get
 * red badges at their elements.  Option To Complete cannot be attributed to
 * single elements and appears only in the summary.  When `diagramIds` is
 * given, overlays for elements that are not rendered are dropped.
 */
export function renderReport(report: CheckReport, diagramIds?: Set<string>): OverlaySet {
  const known = (id: string) => !diagramIds || diagramIds.has(id);
  const violations = new Map<string, string[]>();
  const fixes = new Map<string, string[]>();
  const summary: OverlaySet["summary"] = [];

  for (const property of report.properties) {
    summary.push({ name: property.name, fulfilled: property.fulfilled });
    if (property.name === OPTION_TO_COMPLETE) continue;
    for (const elementId of property.problematicElements) {
      if (!known(elementId)) continue;
      const badges = violations.get(elementId) ?? [];
      badges.push(property.name);
      violations.set(elementId, badges);
    }
  }

  for (const fix of report.quickFixes) {
    if (!known(fix.anchorElement)) continue;
    const ids = fixes.get(fix.anchorElement) ?? [];
    ids.push(fix.id);
    fixes.set(fix.anchorElement, ids);
  }

  return { violations, fixes, summary };
}
