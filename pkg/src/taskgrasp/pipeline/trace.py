"""Append-only run traces: one directory per run, one JSON line per event.

Every pipeline invocation persists exactly one trace, pass or fail. A trace
file starts with a run_started event (the only place the run id, wall-clock
times and config snapshot live), carries one stage event per pipeline step,
and closes with run_finished. Lines are appended and flushed as stages
complete, so a live run is inspectable mid-flight and an interrupted one
keeps everything it got to.

Byte-level determinism: serialize events with sort_keys so two runs of the
same (inputs, config, seed) produce identical files outside run_id and the
created_at/finished_at fields; canonical_trace_bytes strips exactly those.
"""

from __future__ import annotations

import dataclasses
import json
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import TraceWriteError

TRACE_FILE = "trace.jsonl"
VOLATILE_KEYS = ("run_id", "created_at", "finished_at", "parent_run_id")


def new_run_id() -> str:
    return time.strftime("%Y%m%dT%H%M%S") + "-" + secrets.token_hex(4)


def _dump(event: dict) -> str:
    return json.dumps(event, sort_keys=True, ensure_ascii=False)


def append_event(directory, event: dict) -> None:
    """Append one event line; the unit other modules build on."""
    path = Path(directory) / TRACE_FILE
    try:
        with open(path, "a", encoding="utf-8") as f:
            f.write(_dump(event) + "\n")
            f.flush()
    except OSError as exc:
        raise TraceWriteError(f"cannot append to {path}: {exc}") from exc


@dataclass
class TraceWriter:
    """Event sink for one run. ``on_event`` feeds live progress streams."""

    root: Path
    run_id: str = field(default_factory=new_run_id)
    on_event: object = None

    def __post_init__(self):
        self.root = Path(self.root)
        self.directory = self.root / self.run_id
        try:
            self.directory.mkdir(parents=True, exist_ok=False)
        except OSError as exc:
            raise TraceWriteError(f"cannot create run dir {self.directory}: {exc}") from exc

    def _emit(self, event: dict) -> None:
        append_event(self.directory, event)
        if self.on_event is not None:
            self.on_event(event)

    def start(self, instruction: str, config: dict, observation: dict,
              parent_run_id: str = "", override_part: str = "") -> None:
        self._emit(
            {
                "event": "run_started",
                "run_id": self.run_id,
                "created_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
                "instruction": instruction,
                "observation": observation,
                "config": config,
                "parent_run_id": parent_run_id,
                "override_part": override_part,
            }
        )

    def stage_ok(self, name: str, data: dict) -> None:
        self._emit({"event": "stage", "name": name, "status": "ok", "data": data})

    def stage_error(self, name: str, error: Exception) -> None:
        self._emit(
            {
                "event": "stage",
                "name": name,
                "status": "error",
                "error": {"type": type(error).__name__, "message": str(error)},
            }
        )

    def finish(self, status: str) -> None:
        self._emit(
            {
                "event": "run_finished",
                "status": status,
                "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
            }
        )

    def artifact_path(self, name: str) -> Path:
        return self.directory / name


@dataclass
class RunTrace:
    """Parsed view of one trace directory."""

    run_id: str
    created_at: str
    instruction: str
    observation: dict
    config: dict
    parent_run_id: str
    override_part: str
    stages: list
    status: str          # "ok" | "error" | "running"
    directory: Path

    def stage(self, name: str) -> dict | None:
        for s in self.stages:
            if s.get("name") == name:
                return s
        return None

    @property
    def error_stage(self) -> dict | None:
        for s in self.stages:
            if s.get("status") == "error":
                return s
        return None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["directory"] = str(self.directory)
        return d


def read_trace(directory) -> RunTrace:
    directory = Path(directory)
    path = directory / TRACE_FILE
    if not path.is_file():
        raise FileNotFoundError(f"no trace at {path}")
    events = [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    if not events or events[0].get("event") != "run_started":
        raise ValueError(f"trace {path} does not begin with run_started")
    head = events[0]
    stages = [e for e in events if e.get("event") == "stage"]
    status = "running"
    for e in events:
        if e.get("event") == "run_finished":
            status = e["status"]
    return RunTrace(
        run_id=head["run_id"],
        created_at=head["created_at"],
        instruction=head["instruction"],
        observation=head.get("observation", {}),
        config=head.get("config", {}),
        parent_run_id=head.get("parent_run_id", ""),
        override_part=head.get("override_part", ""),
        stages=stages,
        status=status,
        directory=directory,
    )


def canonical_trace_bytes(directory) -> bytes:
    """The trace bytes with run_id and timestamps stripped, for comparisons."""
    path = Path(directory) / TRACE_FILE
    lines = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        event = json.loads(line)
        for key in VOLATILE_KEYS:
            event.pop(key, None)
        lines.append(_dump(event))
    return ("\n".join(lines) + "\n").encode("utf-8")


def list_runs(root) -> list:
    """run_ids under the trace root, oldest first (ids sort by creation time)."""
    root = Path(root)
    if not root.is_dir():
        return []
    return sorted(d.name for d in root.iterdir() if (d / TRACE_FILE).is_file())
