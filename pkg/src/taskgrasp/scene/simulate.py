"""Quasi-static grasp execution against ground-truth surface samples.

Success requires, for some object O in the scene:
  (a) both finger closing lines meet O's surface within the contact
      tolerance of the line through the grasp translation,
  (b) the two contact normals are antipodal within the friction cone,
  (c) the commanded width matches the contact separation within tolerance,
  (d) the swept gripper body (box approximation) hits no OTHER object.

Clauses (a)-(c) depend only on O, clause (d) only on the rest of the scene,
which makes the outcome monotone under removing clutter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import GraspPose
from ..grasp.gripper import GripperSpec
from .generate import PlacedObject, SceneDescription

FAILURE_ORDER = ("NoContact", "NonAntipodal", "WidthMismatch", "Collision")


@dataclass(frozen=True)
class SimTolerances:
    """All execution thresholds in one place."""

    contact_tol: float = 0.008          # meters off the closing line
    cone_half_angle_deg: float = 15.0   # antipodality cone
    width_tol: float = 0.010            # |w - separation| bound
    finger_pad: float = 0.012           # collision box margin beyond each finger
    sweep_margin: float = 0.002         # collision box reach past the fingertip plane
    patch_depth: float = 0.002          # contact patch thickness along the closing axis


@dataclass(frozen=True)
class ExecutionOutcome:
    success: bool
    failure_reason: str | None = None

    def __post_init__(self):
        if self.success and self.failure_reason is not None:
            raise ValueError("successful outcome cannot carry a failure reason")
        if not self.success and self.failure_reason not in FAILURE_ORDER:
            raise ValueError(f"failure_reason must be one of {FAILURE_ORDER}")


def _patch_normal(normals: np.ndarray, patch: np.ndarray) -> np.ndarray:
    if not patch.any():
        # Nothing in the patch faces the pad (edge-on contact): no grip.
        return np.zeros(3)
    mean = normals[patch].mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm < 1e-9:
        return mean
    return mean / norm


def _fit_stage(obj: PlacedObject, g: GraspPose, tol: SimTolerances,
               max_reach: float) -> int:
    """How far clauses (a)-(c) get on this object: 0 NoContact, 1 NonAntipodal,
    2 WidthMismatch, 3 all passed."""
    x_axis = g.closing_axis
    q = obj.points - g.translation
    s = q @ x_axis
    rho = np.linalg.norm(q - np.outer(s, x_axis), axis=1)

    corridor = rho <= tol.contact_tol
    reach = np.abs(s) <= max_reach
    plus = corridor & reach & (s > 0)
    minus = corridor & reach & (s < 0)
    if not plus.any() or not minus.any():
        return 0

    # Closing fingers stop at the outermost surface on each side; the pad
    # presses on a patch there, so its normal is the mean over the samples
    # within patch_depth of that extremum rather than one discrete sample.
    # Only samples facing the incoming pad belong to the patch: material
    # behind a thin wall, or an edge-on face, is never actually pressed.
    s_plus = s[plus].max()
    s_minus = s[minus].min()
    facing = obj.normals @ x_axis
    n_plus = _patch_normal(
        obj.normals, plus & (s >= s_plus - tol.patch_depth) & (facing > 0.0)
    )
    n_minus = _patch_normal(
        obj.normals, minus & (s <= s_minus + tol.patch_depth) & (facing < 0.0)
    )

    cos_cone = np.cos(np.radians(tol.cone_half_angle_deg))
    if n_plus @ x_axis < cos_cone or n_minus @ x_axis > -cos_cone:
        return 1

    separation = s_plus - s_minus
    if abs(g.width - separation) > tol.width_tol:
        return 2
    return 3


def _collides(others: list, g: GraspPose, gripper: GripperSpec,
              tol: SimTolerances) -> bool:
    """Clause (d): any other object's sample inside the swept gripper box."""
    if not others:
        return False
    rot_t = g.rotation.T
    half_x = g.width / 2.0 + tol.finger_pad
    half_y = gripper.body_extent[1] / 2.0 + tol.finger_pad
    z_back = -(gripper.body_extent[2] + gripper.finger_depth)
    for obj in others:
        q = (obj.points - g.translation) @ rot_t.T
        inside = (
            (np.abs(q[:, 0]) <= half_x)
            & (np.abs(q[:, 1]) <= half_y)
            & (q[:, 2] >= z_back)
            & (q[:, 2] <= tol.sweep_margin)
        )
        if inside.any():
            return True
    return False


def simulate_grasp(scene: SceneDescription, g: GraspPose, gripper: GripperSpec,
                   tol: SimTolerances | None = None) -> ExecutionOutcome:
    """Execute the grasp quasi-statically. Pure function of its inputs."""
    tol = tol or SimTolerances()
    # Fingers pre-open to the commanded width and sweep inward, so surfaces
    # beyond w/2 (plus tolerance) are outside the finger travel entirely.
    max_reach = g.width / 2.0 + tol.width_tol

    best_stage = 0
    for obj in scene.objects:
        stage = _fit_stage(obj, g, tol, max_reach)
        if stage == 3:
            others = [o for o in scene.objects if o.object_id != obj.object_id]
            if _collides(others, g, gripper, tol):
                best_stage = max(best_stage, 3)
                continue
            return ExecutionOutcome(success=True)
        best_stage = max(best_stage, stage)

    return ExecutionOutcome(success=False, failure_reason=FAILURE_ORDER[best_stage])
