/** Wire types for the checking service (report schema version 1). */

export interface PropertyResult {
  name: string;
  /** null when the state limit made the verdict indeterminate */
  fulfilled: boolean | null;
  problematicElements: string[];
}

export interface StateDelta {
  tokens: Record<string, number>;
  messages: Record<string, number>;
}

export interface TraceStep {
  executedElement: string;
  stateDelta: StateDelta;
}

export interface EditWire {
  type: string;
  [field: string]: unknown;
}

export interface QuickFixWire {
  id: string;
  property: string;
  anchorElement: string;
  edits: EditWire[];
  rationale: string;
}

export interface CheckStats {
  states: number;
  transitions: number;
  elapsedMs: number;
}

export interface CheckReport {
  schemaVersion: number;
  properties: PropertyResult[];
  initialTokens: Record<string, number>;
  counterexamples: Record<string, TraceStep[]>;
  quickFixes: QuickFixWire[];
  stats: CheckStats;
}

export interface ApplyFixResponse {
  bpmnXml: string;
  inverseEdits: EditWire[];
  appliedFixId: string;
}

export interface ModelIssueWire {
  elementId: string;
  category: string;
  detail: string;
}

export const SAFENESS = "Safeness";
export const OPTION_TO_COMPLETE = "OptionToComplete";
export const PROPER_COMPLETION = "ProperCompletion";
export const NO_DEAD_ACTIVITIES = "NoDeadActivities";
