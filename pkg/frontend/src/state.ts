import type { RunEvent, RunSummary, RunTrace, SceneInfo, StageEvent } from "./types.js";

export const PIPELINE_STAGES = ["reasoning", "grounding", "selection"] as const;
export type StageName = (typeof PIPELINE_STAGES)[number];

export interface StageView {
  name: StageName;
  status: "pending" | "running" | "ok" | "error";
  detail: string;
}

export interface ConsoleState {
  scenes: SceneInfo[];
  runs: RunSummary[];
  activeRunId: string | null;
  traces: Record<string, RunTrace>;
  liveEvents: Record<string, RunEvent[]>;
  /** Non-null when the service is unreachable or misbehaving. */
  banner: string | null;
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.getOwnPropertyNames(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

function stageDetail(stage: StageEvent): string {
  if (stage.status === "error" && stage.error) {
    return `${stage.error.type}: ${stage.error.message}`;
  }
  const data = stage.data ?? {};
  switch (stage.name) {
    case "reasoning": {
      const part = String(data.part ?? "");
      const object = String(data.object ?? "");
      const overridden = data.overridden ? " (override)" : "";
      return `${object} / ${part}${overridden}`;
    }
    case "grounding":
      return `${data.mask_pixels ?? 0} px in box [${(data.box as number[])?.join(", ") ?? ""}]`;
    case "selection": {
      const winner = data.winner as { width?: number } | undefined;
      return `${data.candidate_count ?? 0} candidates, width ${winner?.width?.toFixed(4) ?? "?"}`;
    }
    default:
      return "";
  }
}

export class ConsoleStore {
  private state: ConsoleState = {
    scenes: [],
    runs: [],
    activeRunId: null,
    traces: {},
    liveEvents: {},
    banner: null,
  };

  private listeners = new Set<(state: ConsoleState) => void>();

  getState(): ConsoleState {
    return this.state;
  }

  subscribe(listener: (state: ConsoleState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private commit(partial: Partial<ConsoleState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  setScenes(scenes: SceneInfo[]): void {
    this.commit({ scenes });
  }

  setRuns(runs: RunSummary[]): void {
    this.commit({ runs });
  }

  upsertRun(summary: RunSummary): void {
    const rest = this.state.runs.filter((r) => r.run_id !== summary.run_id);
    this.commit({ runs: [...rest, summary] });
  }

  setActive(runId: string | null): void {
    this.commit({ activeRunId: runId });
  }

  setBanner(message: string | null): void {
    this.commit({ banner: message });
  }

  /** Traces are frozen on the way in; nothing downstream can mutate them. */
  putTrace(trace: RunTrace): void {
    const frozen = deepFreeze(JSON.parse(JSON.stringify(trace)) as RunTrace);
    this.commit({ traces: { ...this.state.traces, [frozen.run_id]: frozen } });
  }

  trace(runId: string): RunTrace | undefined {
    return this.state.traces[runId];
  }

  appendEvent(runId: string, event: RunEvent): void {
    const existing = this.state.liveEvents[runId] ?? [];
    this.commit({ liveEvents: { ...this.state.liveEvents, [runId]: [...existing, event] } });
  }

  clearEvents(runId: string): void {
    const { [runId]: _, ...rest } = this.state.liveEvents;
    this.commit({ liveEvents: rest });
  }

  /** Submitting requires actual instruction text, not just whitespace. */
  canSubmit(instruction: string): boolean {
    return instruction.trim().length > 0;
  }

  /** Overrides only make sense once reasoning has completed successfully. */
  canOverride(runId: string | null): boolean {
    if (!runId) return false;
    const reasoning = this.stageEvents(runId).find((s) => s.name === "reasoning");
    return reasoning !== undefined && reasoning.status === "ok";
  }

  /** Stage events for a run, preferring the stored trace over the live feed. */
  private stageEvents(runId: string): StageEvent[] {
    const trace = this.state.traces[runId];
    if (trace) return trace.stages;
    const live = this.state.liveEvents[runId] ?? [];
    return live.filter((e): e is StageEvent => e.event === "stage");
  }

  private runStatus(runId: string): string {
    const trace = this.state.traces[runId];
    if (trace) return trace.status;
    const live = this.state.liveEvents[runId] ?? [];
    for (const event of live) {
      if (event.event === "run_finished") return event.status;
    }
    return live.length > 0 ? "running" : "unknown";
  }

  /** One row per pipeline stage, in pipeline order, for the progress panel. */
  stageViews(runId: string): StageView[] {
    const seen = new Map(this.stageEvents(runId).map((s) => [s.name, s]));
    const live = this.runStatus(runId) === "running";
    const views: StageView[] = [];
    let upstreamFailed = false;
    let firstMissing = true;
    for (const name of PIPELINE_STAGES) {
      const stage = seen.get(name);
      if (stage) {
        views.push({ name, status: stage.status, detail: stageDetail(stage) });
        if (stage.status === "error") upstreamFailed = true;
      } else {
        const running = live && firstMissing && !upstreamFailed;
        views.push({ name, status: running ? "running" : "pending", detail: "" });
        firstMissing = false;
      }
    }
    return views;
  }

  /** The part the reasoning stage settled on, if it has run. */
  displayedPart(runId: string): string | null {
    const reasoning = this.stageEvents(runId).find((s) => s.name === "reasoning");
    if (!reasoning || reasoning.status !== "ok" || !reasoning.data) return null;
    return String(reasoning.data.part ?? "");
  }
}
