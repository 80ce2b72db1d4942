import { TraceStep } from "./types.js";

/** Timer indirection so tests can drive the clock. */
export interface Scheduler {
  set(fn: () => void, delayMs: number): unknown;
  clear(handle: unknown): void;
}

const realScheduler: Scheduler = {
  set: (fn, delayMs) => setTimeout(fn, delayMs),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export interface AnimationOptions {
  baseDelayMs?: number;
  scheduler?: Scheduler;
  /** called after every cursor change (step, pause, restart) */
  onUpdate?: (session: AnimationSession) => void;
}

function applyDelta(counts: Map<string, number>, delta: Record<string, number>) {
  for (const [key, diff] of Object.entries(delta)) {
    const next = (counts.get(key) ?? 0) + diff;
    if (next === 0) counts.delete(key);
    else counts.set(key, next);
  }
}

/**
 * Replays one counterexample trace as moving tokens.
 *
 * The cursor sits between steps: at cursor `i` the canvas shows the state
 * reached after the first `i` executed elements, and the execution log lists
 * exactly those elements.  Speed changes only stretch or shrink the delay
 * between steps.
 */
export class AnimationSession {
  private readonly tokenFrames: Map<string, number>[];
  private readonly messageFrames: Map<string, number>[];
  private position = 0;
  private speedFactor = 1;
  private timer: unknown = null;
  private readonly baseDelayMs: number;
  private readonly scheduler: Scheduler;
  private readonly onUpdate?: (session: AnimationSession) => void;

  constructor(
    readonly initialTokens: Record<string, number>,
    readonly steps: TraceStep[],
    options: AnimationOptions = {},
  ) {
    this.baseDelayMs = options.baseDelayMs ?? 800;
    this.scheduler = options.scheduler ?? realScheduler;
    this.onUpdate = options.onUpdate;

    const tokens = new Map(Object.entries(initialTokens));
    const messages = new Map<string, number>();
    this.tokenFrames = [new Map(tokens)];
    this.messageFrames = [new Map(messages)];
    for (const step of steps) {
      applyDelta(tokens, step.stateDelta.tokens);
      applyDelta(messages, step.stateDelta.messages);
      this.tokenFrames.push(new Map(tokens));
      this.messageFrames.push(new Map(messages));
    }
  }

  get cursor(): number {
    return this.position;
  }

  get playing(): boolean {
    return this.timer !== null;
  }

  get finished(): boolean {
    return this.position >= this.steps.length;
  }

  get speed(): number {
    return this.speedFactor;
  }

  /** Token count per sequence flow at the current cursor. */
  tokens(): Map<string, number> {
    return new Map(this.tokenFrames[this.position]!);
  }

  /** Pending message count per message flow at the current cursor. */
  messages(): Map<string, number> {
    return new Map(this.messageFrames[this.position]!);
  }

  /** Executed elements up to the cursor. */
  log(): string[] {
    return this.steps.slice(0, this.position).map((s) => s.executedElement);
  }

  stepForward(): boolean {
    if (this.finished) return false;
    this.position += 1;
    this.onUpdate?.(this);
    return true;
  }

  play(): void {
    if (this.timer !== null || this.finished) return;
    this.scheduleTick();
  }

  pause(): void {
    if (this.timer !== null) {
      this.scheduler.clear(this.timer);
      this.timer = null;
    }
    this.onUpdate?.(this);
  }

  restart(): void {
    this.pause();
    this.position = 0;
    this.onUpdate?.(this);
  }

  setSpeed(multiplier: number): void {
    if (!(multiplier > 0)) throw new Error("speed multiplier must be positive");
    this.speedFactor = multiplier;
    if (this.timer !== null) {
      // re-arm the pending tick with the new delay
      this.scheduler.clear(this.timer);
      this.timer = null;
      this.scheduleTick();
    }
  }

  private scheduleTick(): void {
    this.timer = this.scheduler.set(() => {
      this.timer = null;
      this.stepForward();
      if (!this.finished) this.scheduleTick();
    }, this.baseDelayMs / this.speedFactor);
  }
}
