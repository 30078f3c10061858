/** Wire shapes served by the grasping service under /v1. */

export interface SceneInfo {
  scene_id: string;
  classes: string[];
  seed: number;
  width: number;
  height: number;
}

export interface RunSummary {
  run_id: string;
  status: string;
  instruction: string;
  created_at: string;
  parent_run_id: string;
  override_part: string;
  scene_id: string;
}

export interface StageError {
  type: string;
  message: string;
}

export interface StageEvent {
  event: "stage";
  name: string;
  status: "ok" | "error";
  data?: Record<string, unknown>;
  error?: StageError;
}

export interface RunStartedEvent {
  event: "run_started";
  run_id: string;
  created_at: string;
  instruction: string;
  observation: Record<string, unknown>;
  config: Record<string, unknown>;
  parent_run_id: string;
  override_part: string;
}

export interface RunFinishedEvent {
  event: "run_finished";
  status: string;
  finished_at: string;
}

export type RunEvent = RunStartedEvent | StageEvent | RunFinishedEvent;

export interface RunTrace {
  run_id: string;
  created_at: string;
  instruction: string;
  observation: Record<string, unknown>;
  config: Record<string, unknown>;
  parent_run_id: string;
  override_part: string;
  stages: StageEvent[];
  status: string;
}

/** RLE mask as served: counts alternate zero-run first, row-major. */
export interface RleMask {
  size: [number, number];
  counts: number[];
}

export interface GraspRecord {
  rotation: number[][];
  translation: number[];
  width: number;
  score: number;
  objective?: number;
}

export interface GraspsPayload {
  centroid: number[];
  grasps: GraspRecord[];
}

export interface CloudPayload {
  points: number[][];
}

export interface SubmitResponse {
  run_id: string;
  scene_id: string;
}
