"""Synthetic tabletop scenes: catalog, placement, rendering, execution."""

from .catalog import (
    AFFORDANCE_VOCAB,
    CLASS_NAMES,
    SAMPLE_SPACING,
    ObjectSurface,
    PartDef,
    build_object,
    class_parts,
    grasp_part_name,
)
from .generate import (
    MIN_CLEARANCE,
    TABLE_SIZE,
    PlacedObject,
    SceneDescription,
    generate_scene,
    place_object,
)
from .render import (
    RenderedObservation,
    default_camera,
    load_observation,
    look_at,
    render_observation,
    save_observation,
)
from .serialize import (
    SCENE_FORMAT_VERSION,
    load_scene,
    save_scene,
    scene_from_dict,
    scene_to_dict,
)
from .simulate import ExecutionOutcome, SimTolerances, simulate_grasp

__all__ = [
    "AFFORDANCE_VOCAB",
    "CLASS_NAMES",
    "ExecutionOutcome",
    "MIN_CLEARANCE",
    "ObjectSurface",
    "PartDef",
    "PlacedObject",
    "RenderedObservation",
    "SAMPLE_SPACING",
    "SCENE_FORMAT_VERSION",
    "SceneDescription",
    "SimTolerances",
    "TABLE_SIZE",
    "build_object",
    "class_parts",
    "default_camera",
    "generate_scene",
    "grasp_part_name",
    "load_observation",
    "load_scene",
    "look_at",
    "place_object",
    "render_observation",
    "save_observation",
    "save_scene",
    "scene_from_dict",
    "scene_to_dict",
    "simulate_grasp",
]
