"""Grasp-success-rate harness over synthetic scenes.

For every class and run index, a fresh scene is generated (clutter adds 3-5
distractor classes), the class's canonical instruction goes through the full
pipeline, and the winning grasp is executed by the quasi-static simulator.
Per-run trace errors count as failures; the report carries per-class columns
plus the attempt-weighted Average GSR. Everything derives from base_seed, so
a report is reproducible end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..geometry import GraspPose
from ..reasoning import Instruction, load_rules
from ..scene import CLASS_NAMES, default_camera, generate_scene, render_observation, simulate_grasp
from ..errors import TaskGraspError
from .config import PipelineConfig
from .run import run_pipeline
from .trace import append_event

CLUTTER_DISTRACTORS = (3, 5)  # inclusive range added to the target class


@dataclass
class GsrReport:
    """Success tallies per class plus the exact attempt-weighted average."""

    scenario: str
    runs_per_class: int
    base_seed: int
    successes: dict = field(default_factory=dict)   # class -> int
    attempts: dict = field(default_factory=dict)    # class -> int
    failure_counts: dict = field(default_factory=dict)  # class -> {reason: n}

    def class_gsr(self, object_class: str) -> float:
        a = self.attempts[object_class]
        return self.successes[object_class] / a if a else 0.0

    @property
    def total_successes(self) -> int:
        return sum(self.successes.values())

    @property
    def total_attempts(self) -> int:
        return sum(self.attempts.values())

    @property
    def average_gsr(self) -> float:
        return self.total_successes / self.total_attempts if self.total_attempts else 0.0

    def format_table(self) -> str:
        """Classes as columns, one tally row, closed by Average GSR."""
        classes = list(self.successes)
        headers = classes + ["Average GSR"]
        cells = [
            f"{self.successes[c]}/{self.attempts[c]} ({self.class_gsr(c):.2f})"
            for c in classes
        ] + [f"{self.total_successes}/{self.total_attempts} ({self.average_gsr:.3f})"]
        widths = [max(len(h), len(v)) for h, v in zip(headers, cells)]
        head = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
        row = "  ".join(v.ljust(w) for v, w in zip(cells, widths))
        title = f"scenario: {self.scenario}, {self.runs_per_class} runs/class, base seed {self.base_seed}"
        return "\n".join([title, head, row])

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "runs_per_class": self.runs_per_class,
            "base_seed": self.base_seed,
            "successes": dict(self.successes),
            "attempts": dict(self.attempts),
            "failure_counts": {k: dict(v) for k, v in self.failure_counts.items()},
            "average_gsr": self.average_gsr,
        }


def _scene_classes(target: str, scenario: str, seed: int, pool) -> list:
    rng = np.random.default_rng(seed)
    if scenario == "single":
        return [target]
    lo, hi = CLUTTER_DISTRACTORS
    n = int(rng.integers(lo, hi + 1))
    others = [c for c in pool if c != target]
    return [target] + list(rng.choice(others, size=n, replace=False))


def evaluate_gsr(classes=CLASS_NAMES, scenario: str = "clutter",
                 runs_per_class: int = 50, cfg: PipelineConfig | None = None,
                 base_seed: int = 3000, trace_root=None, rules=None,
                 progress=None) -> GsrReport:
    """Run the harness. Deterministic per (arguments, base_seed)."""
    if scenario not in ("single", "clutter"):
        raise ValueError(f"scenario must be 'single' or 'clutter', got '{scenario}'")
    if runs_per_class < 1:
        raise ValueError("runs_per_class must be >= 1")
    cfg = cfg or PipelineConfig(save_artifacts=False)
    rules = rules or load_rules(cfg.rules_path or None)
    classes = list(classes)
    intr, cam = default_camera()

    report = GsrReport(scenario=scenario, runs_per_class=runs_per_class, base_seed=base_seed)
    for target in classes:
        report.successes[target] = 0
        report.attempts[target] = 0
        report.failure_counts[target] = {}

    for target in classes:
        instruction = Instruction(rules.canonical_instruction(target))
        for run_index in range(runs_per_class):
            seed = base_seed + run_index
            report.attempts[target] += 1
            reason = _one_run(
                target, instruction, scenario, seed, cfg, intr, cam,
                trace_root, rules, classes,
            )
            if reason is None:
                report.successes[target] += 1
            else:
                counts = report.failure_counts[target]
                counts[reason] = counts.get(reason, 0) + 1
            if progress is not None:
                progress(target, run_index, reason)
    return report


def _one_run(target, instruction, scenario, seed, cfg, intr, cam,
             trace_root, rules, pool) -> str | None:
    """None on success, else the failure reason tag."""
    scene_classes = _scene_classes(target, scenario, seed, pool)
    try:
        scene = generate_scene(scene_classes, seed=seed)
    except TaskGraspError as exc:
        return type(exc).__name__
    obs = render_observation(scene, intr, cam)

    run_cfg = replace(cfg, sampler_seed=seed)
    trace = run_pipeline(
        instruction, obs, run_cfg,
        trace_root=trace_root or cfg.trace_dir,
        observation_ref={
            "kind": "synthetic",
            "scenario": scenario,
            "classes": scene_classes,
            "seed": seed,
        },
        rules=rules,
    )
    if trace.status != "ok":
        err = trace.error_stage
        return err["error"]["type"] if err else "UnknownError"

    g = GraspPose.from_dict(trace.stage("selection")["data"]["winner"])
    world = GraspPose(
        rotation=cam.rotation @ g.rotation,
        translation=cam.apply(g.translation),
        width=g.width,
        score=g.score,
    )
    outcome = simulate_grasp(scene, world, cfg.gripper())
    append_event(
        trace.directory,
        {
            "event": "stage",
            "name": "execution",
            "status": "ok",
            "data": {
                "success": outcome.success,
                "failure_reason": outcome.failure_reason or "",
            },
        },
    )
    return None if outcome.success else outcome.failure_reason
