import type { GraspsPayload, RunTrace } from "./types.js";

export interface RankingRow {
  /** 1-based display rank; row 1 is the executed winner. */
  rank: number;
  /** Candidate index within the sampled set, as reported by the service. */
  candidateIndex: number;
  objective: number;
  score: number;
  width: number;
  translation: number[] | null;
}

/**
 * Build the ranking table rows. Order is exactly the order served in the
 * selection stage; no client-side re-sorting.
 */
export function rankingRows(trace: RunTrace, grasps: GraspsPayload | null): RankingRow[] {
  const selection = trace.stages.find((s) => s.name === "selection" && s.status === "ok");
  const ranking = selection?.data?.ranking as [number, number][] | undefined;
  if (!ranking) return [];
  return ranking.map(([candidateIndex, objective], i) => {
    const grasp = grasps?.grasps[i];
    return {
      rank: i + 1,
      candidateIndex,
      objective,
      score: grasp?.score ?? Number.NaN,
      width: grasp?.width ?? Number.NaN,
      translation: grasp?.translation ?? null,
    };
  });
}

export function formatRow(row: RankingRow): string[] {
  const t = row.translation
    ? row.translation.map((v) => v.toFixed(3)).join(", ")
    : "";
  return [
    String(row.rank),
    String(row.candidateIndex),
    row.objective.toFixed(3),
    Number.isNaN(row.score) ? "" : row.score.toFixed(3),
    Number.isNaN(row.width) ? "" : `${(row.width * 1000).toFixed(1)} mm`,
    t,
  ];
}

export const RANKING_HEADER = ["#", "candidate", "objective", "score", "width", "translation (m)"];
