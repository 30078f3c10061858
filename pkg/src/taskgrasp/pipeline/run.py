"""One pipeline run: reasoning, grounding, constrained selection.

Stage failures are recorded in the trace and end the run cleanly; they never
escape as exceptions, because callers like the evaluation harness and the
HTTP service must count failures, not crash on them. Only trace-write
problems and outright caller errors (bad config, mismatched images) raise.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from ..errors import TaskGraspError
from ..geometry import GraspPose, PixelMask, depth_to_cloud, validate_grasp_pose
from ..grasp import (
    WIDTH_CLEARANCE,
    RemoteGraspSource,
    SamplerSource,
    constrain_and_select,
)
from ..grounding import (
    OracleGroundingBackend,
    RemoteGroundingBackend,
    encode_rle,
    ground,
)
from ..reasoning import (
    Instruction,
    MockReasoningBackend,
    RemoteReasoningBackend,
    infer_affordance,
    load_rules,
)
from .config import PipelineConfig
from .trace import RunTrace, TraceWriter, read_trace

RANKING_IN_TRACE = 64   # ranking rows stored in the trace event
GRASPS_IN_ARTIFACT = 64  # candidates stored for the 3-D view


def resolve_backends(cfg: PipelineConfig, obs, rules=None) -> tuple:
    """(reasoning backend, grounding backend, grasp source) for this run.

    Mock reasoning and oracle grounding need ground-truth labels, so they
    require a rendered synthetic observation; remote ones take any RGB-D.
    """
    if cfg.reasoning_backend == "mock":
        if not hasattr(obs, "legend"):
            raise ValueError("mock reasoning needs a labeled synthetic observation")
        rules = rules or load_rules(cfg.rules_path or None)
        classes = [cls for cls, _ in obs.legend.values()]
        reasoning = MockReasoningBackend(rules, tuple(classes))
    else:
        reasoning = RemoteReasoningBackend(
            base_url=cfg.remote.reasoning_url,
            model=cfg.remote.reasoning_model,
            api_key_env=cfg.remote.api_key_env,
            timeout_s=cfg.timeout_s,
        )

    if cfg.grounding_backend == "oracle":
        if not hasattr(obs, "label_map"):
            raise ValueError("oracle grounding needs a labeled synthetic observation")
        grounding = OracleGroundingBackend(obs)
    else:
        grounding = RemoteGroundingBackend(
            base_url=cfg.remote.grounding_url,
            timeout_s=cfg.timeout_s,
            api_key_env=cfg.remote.api_key_env,
        )

    if cfg.grasp_source == "sampler":
        source = SamplerSource(
            budget=cfg.sampler_budget,
            seed=cfg.sampler_seed,
            neighbors=cfg.sampler_neighbors,
            cone_half_angle_deg=cfg.sampler_cone_deg,
        )
    else:
        source = RemoteGraspSource(base_url=cfg.remote.grasp_url, timeout_s=cfg.timeout_s)
    return reasoning, grounding, source


def run_pipeline(instr: Instruction, obs, cfg: PipelineConfig,
                 trace_root=None, observation_ref: dict | None = None,
                 backends: tuple | None = None, rules=None,
                 reasoning_override=None, parent_run_id: str = "",
                 override_part: str = "", on_event=None,
                 run_id: str | None = None) -> RunTrace:
    """Execute all stages, persisting one trace under ``trace_root``.

    ``reasoning_override`` (a ReasoningResult) skips the reasoning backend,
    which is how part-override re-runs share their parent's first stage.
    """
    if obs.rgb.shape[:2] != (obs.intrinsics.height, obs.intrinsics.width):
        raise ValueError("observation images do not match the intrinsics")
    reasoning_be, grounding_be, source = backends or resolve_backends(cfg, obs, rules)

    kwargs = {"run_id": run_id} if run_id else {}
    writer = TraceWriter(root=trace_root or cfg.trace_dir, on_event=on_event, **kwargs)
    writer.start(
        instruction=instr.text,
        config=cfg.to_dict(),
        observation=observation_ref or {"kind": "inline",
                                        "width": obs.intrinsics.width,
                                        "height": obs.intrinsics.height},
        parent_run_id=parent_run_id,
        override_part=override_part,
    )

    # Reasoning
    try:
        if reasoning_override is not None:
            reasoning = reasoning_override
            data = reasoning.to_dict()
            data["overridden"] = True
        else:
            reasoning = infer_affordance(instr, obs.rgb, reasoning_be, attempts=cfg.attempts)
            data = reasoning.to_dict()
            data["overridden"] = False
        writer.stage_ok("reasoning", data)
    except TaskGraspError as exc:
        writer.stage_error("reasoning", exc)
        writer.finish("error")
        return read_trace(writer.directory)

    # Grounding
    try:
        box, mask = ground(obs.rgb, reasoning, grounding_be)
        if cfg.save_artifacts:
            writer.artifact_path("mask.json").write_text(json.dumps(encode_rle(mask)))
        writer.stage_ok(
            "grounding",
            {
                "box": box.to_list(),
                "mask_pixels": mask.count,
                "mask_artifact": "mask.json" if cfg.save_artifacts else "",
            },
        )
    except TaskGraspError as exc:
        writer.stage_error("grounding", exc)
        writer.finish("error")
        return read_trace(writer.directory)

    # Constrained selection
    try:
        gripper = cfg.gripper()
        report = constrain_and_select(obs, mask, source, gripper, epsilon=cfg.epsilon)
        pose_report = validate_grasp_pose(report.winner, gripper.max_width + WIDTH_CLEARANCE)
        if not pose_report.ok:
            raise TaskGraspError(f"winner failed pose validation: {pose_report.violations}")
        if cfg.save_artifacts:
            cloud = depth_to_cloud(obs.depth, obs.intrinsics, mask)
            np.save(writer.artifact_path("cloud.npy"), cloud.points.astype(np.float32))
            # grasps in rank order, winner first
            top = report.ranking[:GRASPS_IN_ARTIFACT]
            writer.artifact_path("grasps.json").write_text(
                json.dumps(
                    {
                        "centroid": report.centroid.tolist(),
                        "grasps": [
                            dict(report.candidates.grasps[i].to_dict(), objective=v)
                            for i, v in top
                        ],
                    }
                )
            )
        writer.stage_ok(
            "selection",
            {
                "candidate_count": len(report.ranking),
                "winner": report.winner.to_dict(),
                "centroid": report.centroid.tolist(),
                "epsilon_used": report.epsilon_used,
                "ranking": [[i, v] for i, v in report.ranking[:RANKING_IN_TRACE]],
            },
        )
    except TaskGraspError as exc:
        writer.stage_error("selection", exc)
        writer.finish("error")
        return read_trace(writer.directory)

    writer.finish("ok")
    return read_trace(writer.directory)
