import { AnimationOptions, AnimationSession, Scheduler } from "./animation.js";
import { CheckClient, StaleFixError } from "./client.js";
import { OverlaySet, renderReport } from "./overlays.js";
import { CheckReport, SAFENESS } from "./types.js";

export interface StudioEvents {
  onReport?(report: CheckReport): void;
  onOverlays?(overlays: OverlaySet): void;
  /** non-blocking error surface (toast) */
  onError?(message: string): void;
}

export interface StudioOptions {
  events?: StudioEvents;
  /** element ids present on the canvas; overlays outside it are dropped */
  diagramIds?: () => Set<string> | undefined;
  /** re-check debounce for free-form document edits */
  debounceMs?: number;
  scheduler?: Scheduler;
}

const realScheduler: Scheduler = {
  set: (fn, delayMs) => setTimeout(fn, delayMs),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

/**
 * Editor-side controller: holds the current document, keeps the latest report
 * and overlays in sync, applies quick fixes through the service, and undoes
 * an entire fix in one step by restoring the exact previous document text.
 *
 * Checks follow newest-wins: at most one report is accepted per document
 * revision, and responses for superseded revisions are ignored.
 */
export class Studio {
  private documentXml = "";
  private latestReport: CheckReport | null = null;
  private latestOverlays: OverlaySet | null = null;
  private undoStack: string[] = [];
  private revision = 0;
  private debounceTimer: unknown = null;
  private readonly debounceMs: number;
  private readonly scheduler: Scheduler;

  constructor(
    private readonly client: CheckClient,
    private readonly options: StudioOptions = {},
  ) {
    this.debounceMs = options.debounceMs ?? 300;
    this.scheduler = options.scheduler ?? realScheduler;
  }

  get xml(): string {
    return this.documentXml;
  }

  get report(): CheckReport | null {
    return this.latestReport;
  }

  get overlays(): OverlaySet | null {
    return this.latestOverlays;
  }

  get undoDepth(): number {
    return this.undoStack.length;
  }

  /** Replace the document (file open) and check it immediately. */
  async loadDocument(xml: string): Promise<CheckReport | null> {
    this.documentXml = xml;
    this.undoStack = [];
    return this.recheck();
  }

  /** Free-form model edit: re-check automatically, debounced. */
  editDocument(xml: string): void {
    this.documentXml = xml;
    if (this.debounceTimer !== null) this.scheduler.clear(this.debounceTimer);
    this.debounceTimer = this.scheduler.set(() => {
      this.debounceTimer = null;
      void this.recheck();
    }, this.debounceMs);
  }

  /**
   * Apply one suggested fix by id: the service edits the document, the studio
   * swaps it in, pushes the old text for undo, and re-checks instantly.
   */
  async applyFix(fixId: string): Promise<boolean> {
    const before = this.documentXml;
    try {
      const applied = await this.client.applyFix(before, { fixId });
      this.undoStack.push(before);
      this.documentXml = applied.bpmnXml;
      await this.recheck();
      return true;
    } catch (error) {
      if (error instanceof StaleFixError) {
        this.options.events?.onError?.(`Quick fix is stale: ${error.message}`);
        return false;
      }
      throw error;
    }
  }

  /** One undo reverts one whole fix, byte-exactly. */
  async undo(): Promise<boolean> {
    const previous = this.undoStack.pop();
    if (previous === undefined) return false;
    this.documentXml = previous;
    await this.recheck();
    return true;
  }

  /** Token animation for one property's counterexample, if the report has one. */
  animateCounterexample(
    property: string = SAFENESS,
    options: AnimationOptions = {},
  ): AnimationSession | null {
    if (!this.latestReport) return null;
    const steps = this.latestReport.counterexamples[property];
    if (!steps) return null;
    return new AnimationSession(this.latestReport.initialTokens, steps, options);
  }

  private async recheck(): Promise<CheckReport | null> {
    const revision = ++this.revision;
    let report: CheckReport;
    try {
      report = await this.client.check(this.documentXml, { quickFixes: true });
    } catch (error) {
      if (revision === this.revision) {
        this.options.events?.onError?.(error instanceof Error ? error.message : String(error));
      }
      return null;
    }
    if (revision !== this.revision) return null; // superseded by a newer edit
    this.latestReport = report;
    this.latestOverlays = renderReport(report, this.options.diagramIds?.());
    this.options.events?.onReport?.(report);
    this.options.events?.onOverlays?.(this.latestOverlays);
    return report;
  }
}
