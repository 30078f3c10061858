"""Command-line entry points: run, eval, gen-scene, render, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..reasoning import Instruction
from ..scene import (
    CLASS_NAMES,
    default_camera,
    generate_scene,
    load_scene,
    render_observation,
    save_observation,
    save_scene,
)
from .config import load_config
from .evaluate import evaluate_gsr
from .run import run_pipeline


def _parse_classes(raw: str) -> list:
    classes = [c.strip() for c in raw.split(",") if c.strip()]
    unknown = [c for c in classes if c not in CLASS_NAMES]
    if unknown:
        raise SystemExit(f"unknown classes {unknown}; catalog has {list(CLASS_NAMES)}")
    return classes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taskgrasp")
    parser.add_argument("--config", help="YAML config file", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the pipeline once on a synthetic scene")
    p_run.add_argument("--instruction", required=True)
    p_run.add_argument("--classes", required=True, help="comma-separated object classes")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--trace-dir", default=None)

    p_eval = sub.add_parser("eval", help="grasp-success-rate harness")
    p_eval.add_argument("--classes", default="all")
    p_eval.add_argument("--runs", type=int, default=50)
    p_eval.add_argument("--scenario", choices=("single", "clutter"), default="clutter")
    p_eval.add_argument("--base-seed", type=int, default=3000)
    p_eval.add_argument("--trace-dir", default=None)
    p_eval.add_argument("--json", action="store_true", help="emit the report as JSON")

    p_gen = sub.add_parser("gen-scene", help="generate a scene description file")
    p_gen.add_argument("--classes", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_render = sub.add_parser("render", help="render a scene file to RGB-D PNGs")
    p_render.add_argument("--scene", required=True)
    p_render.add_argument("--out", required=True)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--trace-dir", default=None)
    p_serve.add_argument("--frontend", default=None, help="static console directory")

    return parser


def _cmd_run(args, cfg) -> int:
    scene = generate_scene(_parse_classes(args.classes), seed=args.seed)
    intr, cam = default_camera()
    obs = render_observation(scene, intr, cam)
    trace = run_pipeline(
        Instruction(args.instruction), obs, cfg,
        trace_root=args.trace_dir or cfg.trace_dir,
        observation_ref={"kind": "synthetic", "classes": scene.classes(), "seed": args.seed},
    )
    print(f"run_id: {trace.run_id}  status: {trace.status}")
    for stage in trace.stages:
        if stage["status"] == "ok":
            keys = {
                "reasoning": ("task", "object", "part"),
                "grounding": ("box", "mask_pixels"),
                "selection": ("candidate_count",),
            }.get(stage["name"], ())
            summary = ", ".join(f"{k}={stage['data'][k]}" for k in keys)
            print(f"  {stage['name']}: ok  {summary}")
        else:
            err = stage["error"]
            print(f"  {stage['name']}: {err['type']}: {err['message']}")
    if trace.status == "ok":
        winner = trace.stage("selection")["data"]["winner"]
        t = ", ".join(f"{v:.4f}" for v in winner["translation"])
        print(f"  winner: t=({t}) width={winner['width']:.4f} score={winner['score']:.3f}")
    return 0 if trace.status == "ok" else 1


def _cmd_eval(args, cfg) -> int:
    classes = CLASS_NAMES if args.classes == "all" else _parse_classes(args.classes)
    report = evaluate_gsr(
        classes=classes,
        scenario=args.scenario,
        runs_per_class=args.runs,
        cfg=cfg,
        base_seed=args.base_seed,
        trace_root=args.trace_dir or cfg.trace_dir,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.format_table())
    return 0


def _cmd_gen_scene(args) -> int:
    scene = generate_scene(_parse_classes(args.classes), seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_scene(scene, out)
    print(f"wrote {out} ({len(scene.objects)} objects)")
    return 0


def _cmd_render(args) -> int:
    scene = load_scene(args.scene)
    intr, cam = default_camera()
    obs = render_observation(scene, intr, cam)
    save_observation(obs, args.out)
    print(f"wrote rgb/depth/labels to {args.out}")
    return 0


def _cmd_serve(args, cfg) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cfg, trace_root=args.trace_dir or cfg.trace_dir,
                     frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "gen-scene":
        return _cmd_gen_scene(args)
    if args.command == "render":
        return _cmd_render(args)

    cfg = load_config(args.config)
    if args.command == "run":
        return _cmd_run(args, cfg)
    if args.command == "eval":
        return _cmd_eval(args, cfg)
    if args.command == "serve":
        return _cmd_serve(args, cfg)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
