import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { jsonResponse } from "./helpers.js";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function clientWith(response: Response | Error, calls: Recorded[] = []): ApiClient {
  const fetchFn: FetchLike = (url, init) => {
    calls.push({ url, init });
    if (response instanceof Error) return Promise.reject(response);
    return Promise.resolve(response);
  };
  return new ApiClient("", fetchFn);
}

describe("ApiClient requests", () => {
  it("lists scenes from /v1/scenes and unwraps the envelope", async () => {
    const calls: Recorded[] = [];
    const scenes = [{ scene_id: "demo-mug", classes: ["mug"], seed: 7, width: 960, height: 720 }];
    const client = clientWith(jsonResponse({ scenes }), calls);
    expect(await client.scenes()).toEqual(scenes);
    expect(calls[0].url).toBe("/v1/scenes");
  });

  it("posts run submissions as JSON", async () => {
    const calls: Recorded[] = [];
    const client = clientWith(jsonResponse({ run_id: "r1", scene_id: "demo-mug" }, 202), calls);
    const out = await client.submitRun("I am thirsty", "demo-mug");
    expect(out.run_id).toBe("r1");
    expect(calls[0].url).toBe("/v1/runs");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      instruction: "I am thirsty",
      scene_id: "demo-mug",
    });
  });

  it("posts ad-hoc scenes with classes and optional seed", async () => {
    const calls: Recorded[] = [];
    const client = clientWith(jsonResponse({ run_id: "r2", scene_id: "scene-mug-5" }, 202), calls);
    await client.submitAdhocRun("I am thirsty", ["mug", "hammer"], 5);
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      instruction: "I am thirsty",
      classes: ["mug", "hammer"],
      seed: 5,
    });
  });

  it("posts part overrides to the run's override endpoint", async () => {
    const calls: Recorded[] = [];
    const client = clientWith(jsonResponse({ run_id: "child", scene_id: "demo-mug" }, 202), calls);
    await client.override("parent", "body");
    expect(calls[0].url).toBe("/v1/runs/parent/override");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ part: "body" });
  });

  it("escapes run ids in paths", async () => {
    const calls: Recorded[] = [];
    const client = clientWith(jsonResponse({}), calls);
    await client.trace("a/b c");
    expect(calls[0].url).toBe("/v1/runs/a%2Fb%20c");
  });

  it("prefixes every path with the configured base URL", async () => {
    const calls: Recorded[] = [];
    const fetchFn: FetchLike = (url, init) => {
      calls.push({ url, init });
      return Promise.resolve(jsonResponse({ status: "ok" }));
    };
    const client = new ApiClient("http://other:8000", fetchFn);
    await client.health();
    expect(calls[0].url).toBe("http://other:8000/v1/health");
    expect(client.sceneImageUrl("demo-mug")).toBe("http://other:8000/v1/scenes/demo-mug/image");
    expect(client.eventsUrl("r1")).toBe("http://other:8000/v1/runs/r1/events");
  });
});

describe("ApiClient errors", () => {
  it("surfaces the service's reason text verbatim on 400", async () => {
    const reason = "instruction must be non-empty text";
    const client = clientWith(jsonResponse({ detail: { reason } }, 400));
    const err = await client.submitRun("", "demo-mug").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(400);
    expect((err as ApiError).reason).toBe(reason);
  });

  it("surfaces plain-string details on 404", async () => {
    const client = clientWith(jsonResponse({ detail: "unknown run 'nope'" }, 404));
    const err = await client.trace("nope").catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).reason).toBe("unknown run 'nope'");
  });

  it("falls back to the HTTP status when the error body is not JSON", async () => {
    const response = new Response("boom", { status: 500, statusText: "Internal Server Error" });
    const client = clientWith(response);
    const err = await client.runs().catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(500);
    expect((err as ApiError).reason).toBe("Internal Server Error");
  });

  it("maps network failure to status 0 so the UI can show the outage banner", async () => {
    const client = clientWith(new TypeError("fetch failed"));
    const err = await client.health().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
    expect((err as ApiError).reason).toContain("service unreachable");
  });
});
