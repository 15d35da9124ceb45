import type { ComputeResponse, ConvergenceInfo, DatasetInfo } from "./types";
import type { ViewState } from "./state";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly report: ConvergenceInfo | null = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async datasets(): Promise<DatasetInfo[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/datasets`);
    if (!resp.ok) {
      throw new ApiError(`dataset listing failed (${resp.status})`, resp.status);
    }
    return (await resp.json()) as DatasetInfo[];
  }

  /** POST /compute for the current view; alpha travels only in ssqv mode. */
  async compute(state: ViewState): Promise<ComputeResponse> {
    const body: Record<string, unknown> = {
      dataset: state.dataset,
      mode: state.mode,
      samples: state.samples,
      want_bands: true,
    };
    if (state.mode === "ssqv") {
      body.alpha = state.alpha;
    }
    const resp = await this.fetchFn(`${this.baseUrl}/compute`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      let message = `compute failed (${resp.status})`;
      let report: ConvergenceInfo | null = null;
      try {
        const doc = (await resp.json()) as { error?: string; report?: ConvergenceInfo };
        if (doc.error) message = doc.error;
        report = doc.report ?? null;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(message, resp.status, report);
    }
    return (await resp.json()) as ComputeResponse;
  }
}

/** API base from the page URL (?api=...) with a local-service default. */
export function apiBaseFromLocation(search: string): string {
  const api = new URLSearchParams(search).get("api");
  return (api ?? "http://127.0.0.1:8080").replace(/\/$/, "");
}
