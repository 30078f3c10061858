"""Seeded placement of catalog objects on a square tabletop.

Rejection sampling keeps object surfaces pairwise clear of each other; the
scene is a pure function of (object class list, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import SceneTooCrowded
from ..geometry import RigidTransform
from .catalog import SAMPLE_SPACING, ObjectSurface, build_object

TABLE_SIZE = 0.6        # square tabletop side length, meters
MIN_CLEARANCE = 0.035   # pairwise surface clearance enforced at placement
SCALE_RANGE = (0.92, 1.08)
MAX_ATTEMPTS = 1000


@dataclass
class PlacedObject:
    """One object instance in the scene, with its world-frame samples."""

    object_id: int          # 1-based, stable within the scene
    object_class: str
    pose: RigidTransform    # local -> world (yaw about +Z plus XY offset)
    scale: float
    surface: ObjectSurface  # local-frame samples (scaled)
    points: np.ndarray      # (N, 3) world frame
    normals: np.ndarray     # (N, 3) world frame, unit

    @property
    def part_index(self) -> np.ndarray:
        return self.surface.part_index

    def part_names(self) -> tuple:
        return self.surface.part_names()

    def part_points(self, part_name: str) -> np.ndarray:
        idx = self.part_names().index(part_name)
        return self.points[self.surface.part_index == idx]


@dataclass
class SceneDescription:
    """A generated scene: placed objects plus the seed that produced it."""

    objects: list
    seed: int
    table_size: float = TABLE_SIZE
    clearance: float = MIN_CLEARANCE
    spacing: float = SAMPLE_SPACING

    def object_by_id(self, object_id: int) -> PlacedObject:
        for obj in self.objects:
            if obj.object_id == object_id:
                return obj
        raise KeyError(f"no object with id {object_id}")

    def classes(self) -> list:
        return [o.object_class for o in self.objects]

    def all_points(self) -> np.ndarray:
        if not self.objects:
            return np.zeros((0, 3))
        return np.concatenate([o.points for o in self.objects])


def _yaw_transform(yaw: float, x: float, y: float) -> RigidTransform:
    c, s = np.cos(yaw), np.sin(yaw)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return RigidTransform(rot, np.array([x, y, 0.0]))


def place_object(object_id: int, object_class: str, scale: float,
                 yaw: float, x: float, y: float,
                 spacing: float = SAMPLE_SPACING) -> PlacedObject:
    """Build and pose one object deterministically (no randomness here)."""
    surface = build_object(object_class, scale, spacing)
    pose = _yaw_transform(yaw, x, y)
    return PlacedObject(
        object_id=object_id,
        object_class=object_class,
        pose=pose,
        scale=scale,
        surface=surface,
        points=pose.apply(surface.points),
        normals=pose.rotate(surface.normals),
    )


def generate_scene(classes, seed: int, table_size: float = TABLE_SIZE,
                   clearance: float = MIN_CLEARANCE,
                   spacing: float = SAMPLE_SPACING) -> SceneDescription:
    """Place the requested classes without surface interpenetration.

    Deterministic for fixed inputs. Raises SceneTooCrowded when an object
    cannot be placed within the rejection-sampling budget.
    """
    classes = list(classes)
    if not (1 <= len(classes) <= 10):
        raise ValueError(f"scene must contain 1..10 objects, got {len(classes)}")

    rng = np.random.default_rng(seed)
    half = table_size / 2.0
    placed: list = []
    occupied: cKDTree | None = None

    for i, object_class in enumerate(classes):
        scale = float(rng.uniform(*SCALE_RANGE))
        ok = False
        for _ in range(MAX_ATTEMPTS):
            x, y = rng.uniform(-half + 0.08, half - 0.08, size=2)
            yaw = float(rng.uniform(0.0, 2.0 * np.pi))
            candidate = place_object(i + 1, object_class, scale, yaw, float(x), float(y), spacing)
            xy = candidate.points[:, :2]
            if np.abs(xy).max() > half:
                continue
            if occupied is not None:
                dist, _ = occupied.query(candidate.points, k=1)
                if dist.min() < clearance:
                    continue
            placed.append(candidate)
            pts = np.concatenate([o.points for o in placed])
            occupied = cKDTree(pts)
            ok = True
            break
        if not ok:
            raise SceneTooCrowded(
                f"could not place object {i + 1} ({object_class}) after "
                f"{MAX_ATTEMPTS} attempts (seed {seed})"
            )

    return SceneDescription(
        objects=placed, seed=int(seed), table_size=table_size,
        clearance=clearance, spacing=spacing,
    )
