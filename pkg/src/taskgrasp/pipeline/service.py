"""HTTP service over the pipeline: submit runs, inspect traces, override parts.

Runs execute on a small worker pool; every stage event is buffered per run
and replayed over a server-sent-event stream, so late subscribers see the
whole history before going live. Stage failures live inside traces (the
trace is the source of truth); HTTP errors are reserved for malformed
requests and unknown ids.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, Response, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..errors import TaskGraspError
from ..reasoning import Instruction, ReasoningResult, encode_png, load_rules
from ..scene import CLASS_NAMES, default_camera, generate_scene, render_observation
from .config import PipelineConfig
from .run import run_pipeline
from .trace import list_runs, read_trace

DEMO_SEED = 7
API_PREFIX = "/v1"


def demo_scene_specs() -> dict:
    """One demo clutter scene per catalog class."""
    specs = {}
    for target in CLASS_NAMES:
        others = [c for c in CLASS_NAMES if c != target][:3]
        specs[f"demo-{target}"] = {"classes": [target] + others, "seed": DEMO_SEED}
    return specs


class SceneStore:
    """Lazily generated and rendered named scenes, shared across runs."""

    def __init__(self):
        self.specs = demo_scene_specs()
        self._cache: dict = {}
        self._lock = threading.Lock()

    def spec(self, scene_id: str) -> dict:
        if scene_id not in self.specs:
            raise KeyError(scene_id)
        return self.specs[scene_id]

    def add(self, classes, seed: int) -> str:
        scene_id = f"scene-{'-'.join(classes)}-{seed}"
        with self._lock:
            self.specs.setdefault(scene_id, {"classes": list(classes), "seed": int(seed)})
        return scene_id

    def observation(self, scene_id: str):
        with self._lock:
            if scene_id in self._cache:
                return self._cache[scene_id]
        spec = self.spec(scene_id)
        scene = generate_scene(spec["classes"], seed=spec["seed"])
        intr, cam = default_camera()
        obs = render_observation(scene, intr, cam)
        png = encode_png(obs.rgb)
        with self._lock:
            self._cache[scene_id] = (scene, obs, png)
        return self._cache[scene_id]


class RunRegistry:
    """Run execution plus per-run event buffers for the progress stream."""

    def __init__(self, cfg: PipelineConfig, trace_root: Path):
        self.cfg = cfg
        self.trace_root = Path(trace_root)
        self.trace_root.mkdir(parents=True, exist_ok=True)
        self.scenes = SceneStore()
        self.rules = load_rules(cfg.rules_path or None)
        self._events: dict = {}
        self._cond = threading.Condition()
        self._pool = ThreadPoolExecutor(max_workers=2)

    # Event buffering

    def _record(self, run_id: str, event: dict) -> None:
        with self._cond:
            self._events.setdefault(run_id, []).append(event)
            self._cond.notify_all()

    def events_since(self, run_id: str, start: int, timeout: float = 10.0):
        """Buffered events from ``start``; blocks briefly when none are new."""
        with self._cond:
            buf = self._events.get(run_id, [])
            if len(buf) <= start:
                self._cond.wait(timeout)
                buf = self._events.get(run_id, [])
            return list(buf[start:])

    def is_finished(self, run_id: str) -> bool:
        with self._cond:
            return any(
                e.get("event") == "run_finished" for e in self._events.get(run_id, [])
            )

    # Run execution

    def submit(self, instruction: str, scene_id: str) -> str:
        instr = Instruction(instruction)
        scene_spec = self.scenes.spec(scene_id)
        _, obs, _ = self.scenes.observation(scene_id)
        run_id = self._reserve_run_id()
        self._pool.submit(self._execute, run_id, instr, scene_id, scene_spec, obs, None, "", "")
        return run_id

    def override(self, parent_run_id: str, part: str) -> str:
        parent = self.trace(parent_run_id)
        stage = parent.stage("reasoning")
        if stage is None or stage.get("status") != "ok":
            raise ValueError("parent run has no completed reasoning stage")
        data = dict(stage["data"])
        data.pop("overridden", None)
        reasoning = ReasoningResult(**data)
        reasoning.part = str(part)

        scene_ref = parent.observation
        if scene_ref.get("kind") != "scene" or "scene_id" not in scene_ref:
            raise ValueError("parent run does not reference a service scene")
        scene_id = scene_ref["scene_id"]
        instr = Instruction(parent.instruction)
        _, obs, _ = self.scenes.observation(scene_id)
        run_id = self._reserve_run_id()
        self._pool.submit(
            self._execute, run_id, instr, scene_id, self.scenes.spec(scene_id), obs,
            reasoning, parent_run_id, str(part),
        )
        return run_id

    def _reserve_run_id(self) -> str:
        # The id is minted by the TraceWriter inside _execute; reserve a
        # placeholder buffer first so the events endpoint can subscribe
        # immediately after submit returns.
        from .trace import new_run_id

        run_id = new_run_id()
        with self._cond:
            self._events[run_id] = []
        return run_id

    def _execute(self, run_id, instr, scene_id, scene_spec, obs,
                 reasoning_override, parent_run_id, override_part) -> None:
        from .trace import TraceWriter

        try:
            run_pipeline(
                instr, obs, self.cfg,
                trace_root=self.trace_root,
                observation_ref={"kind": "scene", "scene_id": scene_id, **scene_spec},
                rules=self.rules,
                reasoning_override=reasoning_override,
                parent_run_id=parent_run_id,
                override_part=override_part,
                on_event=lambda e: self._record(run_id, e),
                run_id=run_id,
            )
        except Exception as exc:  # keep the worker alive; surface via events
            self._record(
                run_id,
                {"event": "run_finished", "status": "error", "detail": str(exc)},
            )

    def trace(self, run_id: str):
        directory = self.trace_root / run_id
        try:
            return read_trace(directory)
        except FileNotFoundError:
            raise KeyError(run_id)

    def artifact(self, run_id: str, name: str) -> Path:
        path = self.trace_root / run_id / name
        if not path.is_file():
            raise KeyError(f"{run_id}/{name}")
        return path


def create_app(cfg: PipelineConfig | None = None, trace_root=None,
               frontend_dir=None) -> FastAPI:
    cfg = cfg or PipelineConfig()
    registry = RunRegistry(cfg, Path(trace_root or cfg.trace_dir))
    app = FastAPI(title="taskgrasp", version="1")
    app.state.registry = registry

    def bad_request(reason: str) -> HTTPException:
        return HTTPException(status_code=400, detail={"reason": reason})

    def not_found(reason: str) -> HTTPException:
        return HTTPException(status_code=404, detail={"reason": reason})

    @app.get(API_PREFIX + "/health")
    def health():
        return {"status": "ok"}

    @app.get(API_PREFIX + "/scenes")
    def scenes():
        intr, _ = default_camera()
        return {
            "scenes": [
                {"scene_id": sid, **spec, "width": intr.width, "height": intr.height}
                for sid, spec in sorted(registry.scenes.specs.items())
            ]
        }

    @app.get(API_PREFIX + "/scenes/{scene_id}/image")
    def scene_image(scene_id: str):
        try:
            _, _, png = registry.scenes.observation(scene_id)
        except KeyError:
            raise not_found(f"unknown scene '{scene_id}'")
        return Response(content=png, media_type="image/png")

    @app.post(API_PREFIX + "/runs")
    def submit(body: dict):
        instruction = body.get("instruction", "")
        if not isinstance(instruction, str) or not instruction.strip():
            raise bad_request("instruction must be non-empty text")
        scene_id = body.get("scene_id")
        if scene_id is None:
            classes = body.get("classes")
            if not classes or not isinstance(classes, list):
                raise bad_request("provide scene_id or a classes list")
            unknown = [c for c in classes if c not in CLASS_NAMES]
            if unknown:
                raise bad_request(f"unknown classes {unknown}; catalog has {list(CLASS_NAMES)}")
            scene_id = registry.scenes.add(classes, int(body.get("seed", DEMO_SEED)))
        try:
            run_id = registry.submit(instruction, scene_id)
        except KeyError:
            raise not_found(f"unknown scene '{scene_id}'")
        except ValueError as exc:
            raise bad_request(str(exc))
        except TaskGraspError as exc:
            raise bad_request(f"{type(exc).__name__}: {exc}")
        return JSONResponse(status_code=202, content={"run_id": run_id, "scene_id": scene_id})

    @app.get(API_PREFIX + "/runs")
    def runs():
        summaries = []
        for run_id in list_runs(registry.trace_root):
            t = registry.trace(run_id)
            summaries.append(
                {
                    "run_id": t.run_id,
                    "status": t.status,
                    "instruction": t.instruction,
                    "created_at": t.created_at,
                    "parent_run_id": t.parent_run_id,
                    "override_part": t.override_part,
                    "scene_id": t.observation.get("scene_id", ""),
                }
            )
        return {"runs": summaries}

    @app.get(API_PREFIX + "/runs/{run_id}")
    def trace(run_id: str):
        try:
            return registry.trace(run_id).to_dict()
        except KeyError:
            raise not_found(f"unknown run '{run_id}'")

    @app.get(API_PREFIX + "/runs/{run_id}/events")
    def events(run_id: str):
        if run_id not in registry._events and not (registry.trace_root / run_id).exists():
            raise not_found(f"unknown run '{run_id}'")

        def stream():
            cursor = 0
            while True:
                batch = registry.events_since(run_id, cursor, timeout=5.0)
                cursor += len(batch)
                for event in batch:
                    yield f"data: {json.dumps(event, sort_keys=True)}\n\n"
                    if event.get("event") == "run_finished":
                        return
                if not batch and registry.is_finished(run_id):
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get(API_PREFIX + "/runs/{run_id}/mask")
    def mask(run_id: str):
        try:
            path = registry.artifact(run_id, "mask.json")
        except KeyError:
            raise not_found(f"no mask for run '{run_id}'")
        return json.loads(path.read_text())

    @app.get(API_PREFIX + "/runs/{run_id}/cloud")
    def cloud(run_id: str):
        try:
            path = registry.artifact(run_id, "cloud.npy")
        except KeyError:
            raise not_found(f"no cloud for run '{run_id}'")
        points = np.load(path)
        return {"points": points.tolist()}

    @app.get(API_PREFIX + "/runs/{run_id}/grasps")
    def grasps(run_id: str):
        try:
            path = registry.artifact(run_id, "grasps.json")
        except KeyError:
            raise not_found(f"no grasps for run '{run_id}'")
        return json.loads(path.read_text())

    @app.get(API_PREFIX + "/runs/{run_id}/image")
    def run_image(run_id: str):
        try:
            t = registry.trace(run_id)
        except KeyError:
            raise not_found(f"unknown run '{run_id}'")
        scene_id = t.observation.get("scene_id")
        if not scene_id:
            raise not_found("run has no scene image")
        _, _, png = registry.scenes.observation(scene_id)
        return Response(content=png, media_type="image/png")

    @app.post(API_PREFIX + "/runs/{run_id}/override")
    def override(run_id: str, body: dict):
        part = body.get("part", "")
        if not isinstance(part, str) or not part.strip():
            raise bad_request("part must be non-empty text")
        try:
            new_id = registry.override(run_id, part.strip())
        except KeyError:
            raise not_found(f"unknown run '{run_id}'")
        except ValueError as exc:
            raise bad_request(str(exc))
        return JSONResponse(status_code=202, content={"run_id": new_id})

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="console")

    return app
