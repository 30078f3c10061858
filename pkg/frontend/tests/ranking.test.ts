import { describe, expect, it } from "vitest";

import { formatRow, rankingRows } from "../src/ranking.js";
import type { GraspsPayload, RunTrace } from "../src/types.js";
import { fixtureJson } from "./helpers.js";

describe("rankingRows", () => {
  const trace = fixtureJson<RunTrace>("mug-trace.json");
  const grasps = fixtureJson<GraspsPayload>("mug-grasps.json");

  it("keeps exactly the order the service ranked, no client-side sorting", () => {
    const selection = trace.stages.find((s) => s.name === "selection")!;
    const served = selection.data!.ranking as [number, number][];
    const rows = rankingRows(trace, grasps);
    expect(rows).toHaveLength(served.length);
    rows.forEach((row, i) => {
      expect(row.candidateIndex).toBe(served[i][0]);
      expect(row.objective).toBe(served[i][1]);
      expect(row.rank).toBe(i + 1);
    });
  });

  it("pairs each row with the served grasp record at the same position", () => {
    const rows = rankingRows(trace, grasps);
    rows.forEach((row, i) => {
      expect(row.score).toBe(grasps.grasps[i].score);
      expect(row.width).toBe(grasps.grasps[i].width);
      expect(row.translation).toEqual(grasps.grasps[i].translation);
    });
  });

  it("puts the executed winner in row one", () => {
    const selection = trace.stages.find((s) => s.name === "selection")!;
    const winner = selection.data!.winner as { translation: number[]; score: number };
    const rows = rankingRows(trace, grasps);
    expect(rows[0].rank).toBe(1);
    expect(rows[0].translation).toEqual(winner.translation);
    expect(rows[0].score).toBe(winner.score);
  });

  it("preserves served order even through ties a sort might shuffle", () => {
    const tied: RunTrace = {
      ...trace,
      stages: [
        {
          event: "stage",
          name: "selection",
          status: "ok",
          data: {
            ranking: [
              [9, 1.5],
              [2, 1.5],
              [5, 1.5],
            ],
          },
        },
      ],
    };
    const rows = rankingRows(tied, null);
    expect(rows.map((r) => r.candidateIndex)).toEqual([9, 2, 5]);
  });

  it("is empty without a completed selection stage", () => {
    const failed: RunTrace = { ...trace, stages: [] };
    expect(rankingRows(failed, grasps)).toEqual([]);
  });

  it("renders rows without grasp records when artifacts have not loaded", () => {
    const rows = rankingRows(trace, null);
    expect(rows).toHaveLength(rankingRows(trace, grasps).length);
    expect(Number.isNaN(rows[0].score)).toBe(true);
    expect(rows[0].translation).toBeNull();
  });
});

describe("formatRow", () => {
  it("renders readable cells with width in millimetres", () => {
    const cells = formatRow({
      rank: 1,
      candidateIndex: 12,
      objective: 31.33165,
      score: 0.91234,
      width: 0.0457,
      translation: [0.1836, -0.169, 0.8421],
    });
    expect(cells).toEqual(["1", "12", "31.332", "0.912", "45.7 mm", "0.184, -0.169, 0.842"]);
  });

  it("leaves unknown fields blank instead of printing NaN", () => {
    const cells = formatRow({
      rank: 2,
      candidateIndex: 3,
      objective: 1,
      score: Number.NaN,
      width: Number.NaN,
      translation: null,
    });
    expect(cells[3]).toBe("");
    expect(cells[4]).toBe("");
    expect(cells[5]).toBe("");
  });
});
