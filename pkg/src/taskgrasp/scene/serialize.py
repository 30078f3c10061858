"""Scene serialization.

A scene document stores only what cannot be regenerated: class, scale and
pose per object, plus the generator parameters. Surface samples are
recomputed on load from the same deterministic lattice, which keeps files
small and the round trip exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .catalog import SAMPLE_SPACING
from .generate import PlacedObject, SceneDescription, place_object

SCENE_FORMAT_VERSION = 1


def scene_to_dict(scene: SceneDescription) -> dict:
    return {
        "version": SCENE_FORMAT_VERSION,
        "seed": scene.seed,
        "table_size": scene.table_size,
        "clearance": scene.clearance,
        "spacing": scene.spacing,
        "objects": [
            {
                "object_id": o.object_id,
                "object_class": o.object_class,
                "scale": o.scale,
                "rotation": o.pose.rotation.tolist(),
                "translation": o.pose.translation.tolist(),
            }
            for o in scene.objects
        ],
    }


def scene_from_dict(doc: dict) -> SceneDescription:
    if doc.get("version") != SCENE_FORMAT_VERSION:
        raise ValueError(f"unsupported scene document version {doc.get('version')!r}")
    spacing = float(doc.get("spacing", SAMPLE_SPACING))
    objects = []
    for entry in doc["objects"]:
        rot = np.array(entry["rotation"], dtype=np.float64)
        t = np.array(entry["translation"], dtype=np.float64)
        yaw = float(np.arctan2(rot[1, 0], rot[0, 0]))
        obj = place_object(
            int(entry["object_id"]), entry["object_class"], float(entry["scale"]),
            yaw, float(t[0]), float(t[1]), spacing,
        )
        objects.append(obj)
    return SceneDescription(
        objects=objects,
        seed=int(doc["seed"]),
        table_size=float(doc["table_size"]),
        clearance=float(doc["clearance"]),
        spacing=spacing,
    )


def save_scene(scene: SceneDescription, path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")


def load_scene(path) -> SceneDescription:
    return scene_from_dict(json.loads(Path(path).read_text()))
