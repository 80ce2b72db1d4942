import { ApplyFixResponse, CheckReport, EditWire, ModelIssueWire } from "./types.js";

export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly body: unknown = null,
  ) {
    super(message);
  }
}

/** 409: the fix no longer matches the document. */
export class StaleFixError extends ServiceError {}

/** 400: the document failed to parse; carries the issue list. */
export class InvalidModelError extends ServiceError {
  constructor(status: number, readonly issues: ModelIssueWire[]) {
    super(`model rejected with ${issues.length} issue(s)`, status, issues);
  }
}

export interface CheckOptions {
  properties?: string[];
  quickFixes?: boolean;
  maxStates?: number;
}

export class CheckClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? (globalThis.fetch as unknown as FetchLike);
  }

  async check(bpmnXml: string, options: CheckOptions = {}): Promise<CheckReport> {
    const params = new URLSearchParams();
    if (options.properties?.length) params.set("properties", options.properties.join(","));
    if (options.quickFixes) params.set("quickFixes", "true");
    if (options.maxStates !== undefined) params.set("maxStates", String(options.maxStates));
    const query = params.size ? `?${params}` : "";
    const response = await this.fetchImpl(`${this.baseUrl}/check${query}`, {
      method: "POST",
      headers: { "Content-Type": "application/xml" },
      body: bpmnXml,
    });
    if (!response.ok) {
      const body = (await response.json()) as { issues?: ModelIssueWire[]; error?: string };
      if (response.status === 400 && body.issues) {
        throw new InvalidModelError(response.status, body.issues);
      }
      throw new ServiceError(body.error ?? `check failed (${response.status})`, response.status, body);
    }
    return (await response.json()) as CheckReport;
  }

  async applyFix(
    bpmnXml: string,
    fix: { fixId?: string; edits?: EditWire[] },
  ): Promise<ApplyFixResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/apply-fix`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ bpmnXml, ...fix }),
    });
    if (!response.ok) {
      const body = (await response.json()) as { error?: string };
      const message = body.error ?? `apply-fix failed (${response.status})`;
      if (response.status === 409) throw new StaleFixError(message, response.status, body);
      throw new ServiceError(message, response.status, body);
    }
    return (await response.json()) as ApplyFixResponse;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
