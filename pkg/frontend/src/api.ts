import type {
  CloudPayload,
  GraspsPayload,
  RleMask,
  RunSummary,
  RunTrace,
  SceneInfo,
  SubmitResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Error raised for any failed request. status 0 means the service itself was
 * unreachable; otherwise reason carries the service's own message verbatim.
 */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly reason: string,
  ) {
    super(status === 0 ? reason : `HTTP ${status}: ${reason}`);
    this.name = "ApiError";
  }
}

async function extractReason(response: Response): Promise<string> {
  let reason = response.statusText || `status ${response.status}`;
  try {
    const body: unknown = await response.json();
    const detail = (body as { detail?: unknown }).detail;
    if (typeof detail === "string") {
      reason = detail;
    } else if (detail && typeof detail === "object" && "reason" in detail) {
      reason = String((detail as { reason: unknown }).reason);
    }
  } catch {
    // error body was not JSON; keep the HTTP status text
  }
  return reason;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await extractReason(response));
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/v1/health");
  }

  async scenes(): Promise<SceneInfo[]> {
    const body = await this.request<{ scenes: SceneInfo[] }>("/v1/scenes");
    return body.scenes;
  }

  sceneImageUrl(sceneId: string): string {
    return `${this.baseUrl}/v1/scenes/${encodeURIComponent(sceneId)}/image`;
  }

  submitRun(instruction: string, sceneId: string): Promise<SubmitResponse> {
    return this.post("/v1/runs", { instruction, scene_id: sceneId });
  }

  submitAdhocRun(instruction: string, classes: string[], seed?: number): Promise<SubmitResponse> {
    const payload: Record<string, unknown> = { instruction, classes };
    if (seed !== undefined) payload.seed = seed;
    return this.post("/v1/runs", payload);
  }

  async runs(): Promise<RunSummary[]> {
    const body = await this.request<{ runs: RunSummary[] }>("/v1/runs");
    return body.runs;
  }

  trace(runId: string): Promise<RunTrace> {
    return this.request(`/v1/runs/${encodeURIComponent(runId)}`);
  }

  mask(runId: string): Promise<RleMask> {
    return this.request(`/v1/runs/${encodeURIComponent(runId)}/mask`);
  }

  cloud(runId: string): Promise<CloudPayload> {
    return this.request(`/v1/runs/${encodeURIComponent(runId)}/cloud`);
  }

  grasps(runId: string): Promise<GraspsPayload> {
    return this.request(`/v1/runs/${encodeURIComponent(runId)}/grasps`);
  }

  runImageUrl(runId: string): string {
    return `${this.baseUrl}/v1/runs/${encodeURIComponent(runId)}/image`;
  }

  eventsUrl(runId: string): string {
    return `${this.baseUrl}/v1/runs/${encodeURIComponent(runId)}/events`;
  }

  override(runId: string, part: string): Promise<SubmitResponse> {
    return this.post(`/v1/runs/${encodeURIComponent(runId)}/override`, { part });
  }
}
