"""Record console test fixtures from a real in-process service.

Re-run after backend changes that alter payload shapes:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from fastapi.testclient import TestClient

from taskgrasp.pipeline import PipelineConfig
from taskgrasp.pipeline.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def wait(client: TestClient, run_id: str) -> dict:
    deadline = time.monotonic() + 120
    while time.monotonic() < deadline:
        trace = client.get(f"/v1/runs/{run_id}").json()
        if trace["status"] != "running":
            return trace
        time.sleep(0.05)
    raise RuntimeError(f"run {run_id} never finished")


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    if isinstance(payload, (bytes, str)):
        mode = "wb" if isinstance(payload, bytes) else "w"
        with open(path, mode) as f:
            f.write(payload)
    else:
        path.write_text(json.dumps(payload, indent=1, sort_keys=True))
    print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")


def record_run(client: TestClient, prefix: str, trace: dict) -> None:
    run_id = trace["run_id"]
    trace.pop("directory", None)  # host path, meaningless to the console
    dump(f"{prefix}-trace.json", trace)
    if trace["status"] == "ok":
        dump(f"{prefix}-mask.json", client.get(f"/v1/runs/{run_id}/mask").json())
        dump(f"{prefix}-grasps.json", client.get(f"/v1/runs/{run_id}/grasps").json())


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    import tempfile

    app = create_app(cfg=PipelineConfig(sampler_budget=8192),
                     trace_root=tempfile.mkdtemp(prefix="fixture-runs-"))
    with TestClient(app) as client:
        dump("scenes.json", client.get("/v1/scenes").json())

        # the scoop walkthrough on the demo spoon scene
        run_id = client.post("/v1/runs", json={
            "instruction": "I want to scoop something",
            "scene_id": "demo-spoon",
        }).json()["run_id"]
        scoop = wait(client, run_id)
        record_run(client, "scoop", scoop)
        dump("scoop-cloud.json", client.get(f"/v1/runs/{run_id}/cloud").json())
        dump("scoop-events.sse", client.get(f"/v1/runs/{run_id}/events").text)

        # a mug run plus its part-override re-run
        run_id = client.post("/v1/runs", json={
            "instruction": "I am thirsty",
            "scene_id": "demo-mug",
        }).json()["run_id"]
        mug = wait(client, run_id)
        record_run(client, "mug", mug)

        child_id = client.post(f"/v1/runs/{run_id}/override",
                               json={"part": "body"}).json()["run_id"]
        record_run(client, "mug-override", wait(client, child_id))


if __name__ == "__main__":
    main()
